//! Group cohomology with trivial coefficients: finite groups through the bar
//! complex, profinite groups through towers of finite quotients.

pub mod bar;
pub mod continuous;
pub mod finite;
pub mod inflation;
pub mod presentation;
pub mod symbolic;

pub use bar::{bar_complex, bar_complex_with, bar_differential, BarCochainComplex};
pub use continuous::{
    continuous_cohomology, ContinuousCohomology, ContinuousValue, Evidence, Piece,
    StabilizationRule, Transition,
};
pub use finite::{cyclic_closed_form, group_cohomology, CohomologyEngine};
pub use inflation::{inflation_map, InflationMap};
pub use presentation::CohomologyPresentation;
pub use symbolic::{symbolic_cohomology, SymbolicVerdict, VanishingReason};
