use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("rule for `{gen}` is not triangular: `{offender}` is not an earlier generator")]
    NotTriangular { gen: String, offender: String },
    #[error("generator `{0}` takes part in both a power rule and an inverse pair")]
    MixedRelation(String),
    #[error("derivation `{derivation}` does not annihilate the relation of `{gen}`")]
    DerivationIncompatible { derivation: String, gen: String },
    #[error("no rule for derivation `{derivation}` on generator `{gen}`")]
    MissingDerivation { derivation: String, gen: String },
    #[error("unknown derivation `{0}`")]
    UnknownDerivation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("substitution image violates the relation of `{0}`")]
    SubstitutionInconsistent(String),
    #[error("substitution must map every source generator (missing `{0}`)")]
    SubstitutionIncomplete(String),

    #[error("forms belong to different frames")]
    FrameMismatch,
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("unknown basis symbol `{0}`")]
    UnknownSymbol(String),
    #[error("no exterior derivative rule for symbol `{0}`")]
    MissingSymbolRule(String),
    #[error("no exterior derivative rule for generator `{0}`")]
    MissingGeneratorRule(String),
    #[error("d\u{b2} \u{2260} 0 on `{0}`")]
    NotClosed(String),
    #[error("exterior derivative of the relation of `{0}` does not vanish on the locus")]
    RelationNotClosed(String),
    #[error("expected a form of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: u8, got: u8 },
    #[error("frame is not declared orthonormal; Hodge star unavailable")]
    NotOrthonormal,
    #[error("Hodge star needs an all-degree-one coframe")]
    NotSimpleCoframe,
    #[error("expansion image of `{symbol}` has wrong degree")]
    BadExpansion { symbol: String },
    #[error("frame morphism is inconsistent on `{0}`")]
    InconsistentMorphism(String),
    #[error("interior product with a symbol of degree > 1")]
    InteriorOnHigherSymbol,

    #[error("coframe symbol name `{0}` already taken")]
    NameCollision(String),
    #[error("supplied normal is not unit length for the given metric")]
    MetricCheckFailed,
    #[error("matrix of \u{3c9}\u{2082} is degenerate at a sample point")]
    DegenerateOmega2,
    #[error("structure kind mismatch: {0}")]
    KindMismatch(String),
    #[error("family has no rule for time derivation `{0}`")]
    MissingTimeRule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
