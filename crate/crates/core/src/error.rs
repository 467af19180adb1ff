use thiserror::Error;

/// Failures reported by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Incompatible objects were combined (truncation or dimension mismatch).
    #[error("configuration error: {0}")]
    Config(String),

    /// The eigensolver failed on one excitation sector.
    #[error("numerical failure in sector N={sector}: {message}")]
    Numerical { sector: usize, message: String },

    /// The dispersive effective model was requested outside its validity regime.
    #[error("dispersive regime violated: validity ratio {ratio:.4} below threshold {threshold:.4}")]
    DispersiveRegime { ratio: f64, threshold: f64 },

    /// Postselecting both qubits in the ground state has (numerically) zero probability.
    #[error("ground-state postselection impossible: probability {probability:.3e}")]
    PostselectionImpossible { probability: f64 },

    /// Projecting the fields onto coherent states has (numerically) zero probability.
    #[error("coherent projection impossible: probability {probability:.3e}")]
    ProjectionImpossible { probability: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
