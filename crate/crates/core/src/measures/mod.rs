//! Entropic and geometric correlation measures and the checks built on them.

pub mod audit;
pub mod discord;
pub mod entropy;
pub mod identity;
pub mod scaling;
pub mod tilde;

pub use audit::{monotonicity_audit, AuditConfig, AuditTable, Measure};
pub use discord::{
    discord, geometric_discord, geometric_discord_qubit_closed_form, projection_distance_sq, Argmin, ChannelClass,
    MeasureReport,
};
pub use entropy::{
    apply_on_a, apply_on_b, cond_mutual_info, cond_mutual_info_ab_given_c, cond_mutual_info_via_c, dilate_on_a,
    info_loss, mutual_info, mutual_info_groups, vn_entropy, TriDims,
};
pub use identity::{check_proof_identity, verify_identity, IdentityConfig, IdentityReport};
pub use scaling::{scaling_demo, ScalingReport};
pub use tilde::{tilde_geometric_discord, SamplerConfig};
