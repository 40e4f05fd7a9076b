//! Čech–Deligne cochains on finite good covers.

pub mod cochain;
pub mod curvature;
pub mod dglie;
pub mod gauge;
pub mod holonomy;
pub mod nerve;

pub use cochain::{form_levels, CochainRepr, CocycleReport, DeligneCochain};
pub use curvature::{curvature, glue, is_integral, prequantize_torus, restrict_global, IntegralityReport};
pub use dglie::{
    compare_models, dg_lie_bracket, dg_lie_differential, dglie_membership, lie_on_cochain, member_from_field,
    potential_cochain, r3_corpus, CompareReport, MembershipReport, PairDefect, SemidirectElement,
};
pub use gauge::{
    automorphisms, flat_connection, flat_moduli, gauge_reduce, random_cochain, random_gauge, winding_connection,
    FlatModuliReport, GaugeBand, GaugeOutcome,
};
pub use holonomy::{holonomy, holonomy_along, integrate_interval, reduce_mod_z, same_mod_z, HolonomyReport};
pub use nerve::{Nerve, NerveKind, NerveRef, MAX_SIMPLEX_DIM};
