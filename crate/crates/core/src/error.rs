use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    // graph construction / structure
    #[error("unknown vertex id {0}")]
    UnknownVertexId(usize),
    #[error("unknown edge id {0}")]
    UnknownEdgeId(usize),
    #[error("graph has parallel edges (e.g. edges {0} and {1})")]
    MultiEdgePresent(usize, usize),
    #[error("graph has a loop (edge {0})")]
    LoopPresent(usize),
    #[error("edge {0} has no orientation")]
    UnorientedEdge(usize),
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("graph is not cubic: vertex {0} has degree {1}")]
    NotCubic(usize, usize),
    #[error("vertex {0} has degree {1}, above the supported bound")]
    DegreeTooHigh(usize, usize),
    #[error("edge {0} has weight zero")]
    ZeroWeightEdge(usize),

    // embeddings
    #[error("rotation system does not cover the edge ends exactly: {0}")]
    IncompleteRotation(String),
    #[error("not a planar embedding: component has V={v} E={e} F={f}, V-E+F={chi} != 2")]
    NotPlanarEmbedding {
        v: usize,
        e: usize,
        f: usize,
        chi: i64,
    },
    #[error("no embedding (rotation system) supplied")]
    MissingEmbedding,
    #[error("cycle is not a simple cycle of the graph: {0}")]
    CycleNotInGraph(String),
    #[error("cycle has odd length {0}; tension is defined for even cycles")]
    OddCycle(usize),

    // gadgets and signatures
    #[error("determinantal signature with {0} external stubs needs a base pairing")]
    MissingBasePairing(usize),
    #[error("pairings have mismatched support")]
    MismatchedSupport,

    // pfaffian
    #[error("dimension {0} exceeds the defining-sum oracle bound {1}")]
    DimensionTooLargeForOracle(usize, usize),
    #[error("matrix is not skew-symmetric at ({0},{1})")]
    NotSkewSymmetric(usize, usize),

    // fkt / semipfaffian
    #[error("orientation failed Pfaffian verification: {0}")]
    OrientationNotVerifiedPfaffian(String),
    #[error("graph has tension: {0}")]
    TensionPresent(String),
    #[error("no semi-Pfaffian orientation exists for this embedded graph")]
    NoSemiPfaffianOrientation,
    #[error("orientation search space too large: {0} edges exceeds bound {1}")]
    SearchSpaceTooLarge(usize, usize),

    // reduction compiler
    #[error("corridor routing is not planar: {0}")]
    RoutingNotPlanar(String),
    #[error("cannot pad degree-2 vertices to cubic: {0}")]
    PaddingFailed(String),

    // cnf
    #[error("formula has {0} variables, above the truth-table bound {1}")]
    TooManyVariables(usize, usize),
    #[error("DIMACS parse error: {0}")]
    DimacsParse(String),

    // io / resources
    #[error("bad rational literal: {0:?}")]
    BadRational(String),
    #[error("bad input file: {0}")]
    BadFile(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
