//! Placement of a UAV-mounted base station that maximizes the number of
//! ground users served at guaranteed data rates.
//!
//! * [`channel`]: air-to-ground LoS/NLoS path loss and the coverage radius
//!   it allows at a given altitude.
//! * [`geometry`]: points, circumcircles and disk membership.
//! * [`placement`]: the capacity-constrained placement problem, the
//!   density-aware search, an exhaustive oracle and a max-coverage baseline.
//! * [`power`]: transmit power per user and over a populated disk.
//! * [`scenario`]: synthetic user populations and density sweeps.

pub mod channel;
pub mod geometry;
pub mod placement;
pub mod power;
pub mod quadrature;
pub mod scenario;

pub use channel::{avg_path_loss, fspl, max_radius, p_los, p_nlos, ChannelEnv, ChannelError};
pub use geometry::{circumcircle, covered_set, distance, Circle, GeometryError, Point2D};
pub use placement::{
    brute_force_placement, density_aware_placement, evaluate_candidate, max_coverage_placement, validate,
    Allocation, Candidate, Method, Placement, PlacementError, UavConfig, UavParams, User, Violation,
};
pub use power::{expected_tx_power, per_user_tx_power, placement_power_report, PowerError, PowerReport};
pub use scenario::{density_sweep, DemandTier, Region, Scenario, ScenarioError, UserDistribution};
