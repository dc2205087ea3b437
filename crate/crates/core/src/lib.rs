//! Exact symbolic differential geometry of the θ-deformed four-sphere.

pub mod algebra;
pub mod central;
pub mod chart;
pub mod connection;
pub mod curvature;
pub mod derivations;
pub mod geometry;
pub mod json;
pub mod localization;
pub mod parse;
mod poly2;
pub mod scalar;
pub mod trace;
pub mod verify;

pub use algebra::{AlgebraElement, AlgebraError, Generator, MultiIndex};
pub use central::{CentralFactor, CentralPoly};
pub use chart::ChartPoint;
pub use connection::{closed_form_connection, solve_connection, ConnectionTable};
pub use curvature::{CurvatureError, CurvatureTensor};
pub use derivations::{DeltaRule, Derivation, DerivationBasis};
pub use geometry::{Ambient5, GeometryError, Metric, ModuleVec, Perturbation, PerturbationKind, Projector};
pub use localization::{CentralDenominator, LocalElement, LocalizationError};
pub use parse::{parse_algebra, parse_local, ParseError};
pub use scalar::{GaussianRational, QScalar};
pub use trace::{
    euler_characteristic, quadrature_oracle, tau, tau_delta, tau_delta_loc, EulerCharacteristic, TraceError,
    TraceValue,
};
pub use verify::{run_suite, Check, Context, Status, Suite, VerificationReport};
