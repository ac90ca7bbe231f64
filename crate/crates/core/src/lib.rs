//! Exact slope-stability toolkit over Néron-Severi lattices of surfaces.
//!
//! Everything is exact rational arithmetic: lattices and their pairing,
//! rational polyhedral cones, degree-two Chern calculus, slope stability
//! over finite destabilizer families, and the surface criteria built on
//! top (Zariski decomposition, Bogomolov-Gieseker, flatness gates).

pub mod chern;
pub mod cone;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod rational;
pub mod smith;
pub mod stability;
pub mod surface;

pub use error::{Error, ErrorKind, Result};
pub use lattice::{
    cartier_index, certify_signature, hodge_bound, pairing, Direction, HodgeCertificate,
    LatticeMorphism, NsLattice, NumClass, Signature,
};
pub use chern::{
    bg_discriminant, dual_class, sym_split, tensor_class, whitney_extension, SheafClass,
    SplitBundle,
};
pub use cone::{segment, Membership, RationalCone};
pub use rational::Rational;
pub use stability::{
    wall_hyperplanes, Extremum, Filtration, FiltrationKind, Interval, PointClass, Quotient,
    SegmentReport, Stability, SubsheafFamily, Subobject, Wall, WallCrossing, WallPosition,
};
pub use surface::{
    bgi_verdict, effectivity_classifier, flatness_higher, flatness_surface, lambda_report,
    nef_from_zero_square, proj_flatness_surface, split_pair, torus_quotient_gate,
    zariski_decomposition, BgiStatus, BgiVerdict, Effectivity, FlatCondition, FlatnessVerdict,
    HigherFlatVerdict, LambdaReport, LambdaVanishing, NefVerdict, NegativeCurveSet,
    ProjFlatBranch, ProjFlatVerdict, Side, TorusGate, ZariskiPair,
};
