#![doc = include_str!("../../../README.md")]

pub mod bernstein;
pub mod error;
pub mod numerics;
pub mod real;
pub mod rng;
pub mod special;
pub mod idt;
pub mod samplers;
pub mod maxstable;
pub mod families;
pub mod infdiv;
pub mod verify;

pub use bernstein::{BernsteinFunction, DistributionF, LevyMeasure, StieltjesMeasure};
pub use error::{Error, Result};
pub use families::{catalog, family, lookup, FamilySpec};
pub use idt::{check_admissible, dual_pair, normalize, ClosedForms, IdtModel, IdtPair};
pub use real::Real;
pub use rng::RngStream;
pub use verify::{run_suite, Check, Suite, SuiteConfig, VerificationReport};

pub type Distribution64 = DistributionF<f64>;
pub type Distribution32 = DistributionF<f32>;
pub type Levy64 = LevyMeasure<f64>;
pub type Levy32 = LevyMeasure<f32>;
pub type Bernstein64 = BernsteinFunction<f64>;
pub type Bernstein32 = BernsteinFunction<f32>;
pub type Stieltjes64 = StieltjesMeasure<f64>;
pub type Stieltjes32 = StieltjesMeasure<f32>;
pub type Model64 = IdtModel<f64>;
pub type Model32 = IdtModel<f32>;
pub type Family64 = FamilySpec<f64>;
pub type Family32 = FamilySpec<f32>;
