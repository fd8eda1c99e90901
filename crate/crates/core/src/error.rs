use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by lattice construction and the operations built on it.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimension argument out of range for the requested construction.
    InvalidDimension { what: &'static str, n: usize },
    /// Numeric argument outside its domain.
    InvalidParameter { name: &'static str, value: f64 },
    /// Matrix shapes do not match.
    ShapeMismatch { expected: (usize, usize), got: (usize, usize) },
    /// Generator rows are linearly dependent.
    Degenerate,
    /// Operation needs a square (full-rank) generator.
    Unsupported(&'static str),
    /// Enumeration would exceed the point cap.
    ResourceCap { predicted: u64, cap: u64 },
    /// `M_e · M_b^{-1}` is not an integer matrix.
    NotSublattice { max_residual: f64 },
    /// `|Λ_b/Λ_e|` is not a power of two.
    IndexNotPowerOfTwo { index: u64 },
    /// Point is not a member of the lattice.
    NotInLattice { max_residual: f64 },
    /// Bit string or digit vector of the wrong shape.
    BadLabel(&'static str),
    /// Integer overflow in exact arithmetic.
    Overflow,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension { what, n } => write!(f, "invalid dimension {n} for {what}"),
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter `{name}` out of range: {value}")
            }
            Error::ShapeMismatch { expected, got } => write!(
                f,
                "shape mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::Degenerate => f.write_str("generator rows are linearly dependent"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::ResourceCap { predicted, cap } => write!(
                f,
                "enumeration refused: about {predicted} points requested, cap is {cap}"
            ),
            Error::NotSublattice { max_residual } => write!(
                f,
                "second lattice is not a sublattice of the first (residual {max_residual:e})"
            ),
            Error::IndexNotPowerOfTwo { index } => {
                write!(f, "quotient has {index} cosets, which is not a power of two")
            }
            Error::NotInLattice { max_residual } => {
                write!(f, "point is not in the lattice (residual {max_residual:e})")
            }
            Error::BadLabel(what) => write!(f, "bad label: {what}"),
            Error::Overflow => f.write_str("integer overflow in exact arithmetic"),
        }
    }
}

impl core::error::Error for Error {}
