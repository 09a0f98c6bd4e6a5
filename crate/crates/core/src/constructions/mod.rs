//! The concrete structures behind the separation results: the cycle gadgets `C_m` and `C_m^∨`,
//! the eight-function set `X`, the sink extension to total functions, and the structure that
//! defeats bounded-radius forwardness.

mod cycles;
mod fig2;

pub use cycles::{
    build_cm, build_cm_vee, build_counterexample, closure_escape_direct, sink_extension, subclaim1_orbits,
    verify_claim2, Claim2Options, Claim2Report, CounterexampleBundle, SinkExtension, X_NAMES,
};
pub use fig2::{build_fig2, phi_u, psi_xy, remove_b0, replay_fig2, Fig2Replay};
