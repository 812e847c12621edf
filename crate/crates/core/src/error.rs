use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse word {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("word {0} is not freely reduced")]
    NotReduced(String),

    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),

    #[error("empty word where a nontrivial word is required")]
    EmptyWord,

    #[error("word {0} lies in the subgroup generated by b")]
    InBetaSubgroup(String),

    #[error("word {word} is a power of {base}")]
    InCyclicSubgroup { word: String, base: String },

    #[error("exponent sum of b in {word} is {sum}, expected 0")]
    NonzeroBetaSum { word: String, sum: i64 },

    #[error("generator {gen} outside an alphabet of rank {rank}")]
    GeneratorOutOfRange { gen: usize, rank: usize },

    #[error("invalid Nielsen move: {0}")]
    InvalidMove(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("graph is not well-labeled at vertex {vertex}")]
    NotWellLabeled { vertex: i64 },

    #[error("graph contains a cycle labeled only by b through vertex {vertex}")]
    BetaCycle { vertex: i64 },

    #[error("folding identified v0 with w.v0")]
    WitnessCollision,

    #[error("conflicting edge for generator {gen} at {point}")]
    EdgeConflict { gen: usize, point: i64 },

    #[error("interval [{lo}, {hi}] is not pointwise fixed by every alpha")]
    NotAlphaFixed { lo: i64, hi: i64 },

    #[error("empty set")]
    EmptySet,

    #[error("orbit census mismatch at size {size}: c has {c_count}, d has {d_count}")]
    CensusMismatch {
        size: usize,
        c_count: usize,
        d_count: usize,
    },

    #[error("an orbit through {0} leaves the matching region")]
    OrbitEscapesRegion(i64),

    #[error("no fresh witness point left for {0}")]
    DepletedWitnesses(String),

    #[error("sets have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),

    #[error("point {0} is not fixed as required")]
    NotFixed(i64),

    #[error("point {0} collides with an existing sigma assignment")]
    SigmaCollision(i64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("snapshot schema version {found}, expected {expected}")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
