//! Exact graded exterior calculus over polynomial–Fourier coefficients.

pub mod chart;
pub mod coef;
pub mod form;
pub mod json;
pub mod parse;
pub mod primitive;
pub mod pullback;
pub mod random;

pub use chart::{Axis, AxisKind, Chart, ChartRef};
pub use coef::{CoefFn, Mono};
pub use form::{
    contract, contract_with, lie_bracket, lie_derivative, wedge, Basis, Form, MultiVector, SlotOrder, VectorField,
    DEFAULT_SLOT_ORDER,
};
pub use parse::{parse_form, parse_function, parse_multivector, parse_vector_field};
pub use primitive::primitive;
pub use pullback::{pullback, AffineMap, AxisImage};
