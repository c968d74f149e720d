use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error(
        "{what} too large: predicted {predicted_vertices} vertices / {predicted_edges} edges \
         exceeds cap of {cap}"
    )]
    SizeLimit {
        what: &'static str,
        predicted_vertices: usize,
        predicted_edges: usize,
        cap: usize,
    },

    #[error("{what} did not converge after {iterations} iterations (last estimate {estimate:e})")]
    Convergence {
        what: &'static str,
        iterations: usize,
        /// Residual or gap at the last iterate, depending on the algorithm.
        estimate: f64,
        last_iterate: Vec<f64>,
    },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("singular block: vertices {component:?} have no path to the terminal set")]
    Singular { component: Vec<usize> },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
