use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument hit (or came within 1e-12 of) a pole of Γ.
    #[error("argument {arg} is at the pole {pole} of the gamma function")]
    Pole { arg: f64, pole: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid ratio: {0}")]
    InvalidSpec(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// The H-function is not evaluated within 1e-6·ρ of the support endpoint ρ.
    #[error("x = {x} is too close to the support endpoint rho = {rho}")]
    SingularPoint { x: f64, rho: f64 },

    /// Quadrature stopped before reaching the requested accuracy.
    #[error("quadrature did not converge: best estimate {estimate} with error {error}")]
    Accuracy { estimate: f64, error: f64 },
}
