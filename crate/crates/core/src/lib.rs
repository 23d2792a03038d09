//! Exact eigenstates of three identical bosons on a ring with pairwise
//! delta-function interactions.
//!
//! Every eigenstate is a Bethe-ansatz superposition of six plane waves built
//! from three wavenumbers `k1, k2, k3`. The wavenumbers solve a pair of coupled
//! transcendental equations whose single parameter is the dimensionless
//! coupling `c`. States are labelled by their free-particle quantum numbers
//! `(n1, n2)` at `c = 0` and followed continuously in `c`:
//!
//! * [`model`] holds labels, momenta, the two coordinate charts and energies.
//! * [`system`] holds the residual functions, branch-tracked logarithms and the
//!   Newton corrector.
//! * [`continuation`] traces a label over a coupling grid, locates critical
//!   couplings where two momenta collide and switches to complex momenta.
//! * [`asymptotics`] collects the closed-form limiting expansions used as
//!   seeds and as independent oracles.
//! * [`wavefunction`] evaluates the eigenfunction and its boundary conditions.
//! * [`observables`] gives the exact norm, the potential-energy expectation
//!   and ternary density grids.
//! * [`cli`] and [`verify`] provide the machine-readable command-line front end.
//!
//! ```
//! use bethe3::prelude::*;
//!
//! let label = QuantumLabel::new(1, 1).unwrap();
//! let state = solve_state(label, -9.0, &TraceOptions::default()).unwrap();
//! // Below the critical coupling -6 the (1,1) state carries a bound pair.
//! assert!(matches!(state.coords, BranchCoords::ComplexK { .. }));
//! assert!(state.energy < 0.0);
//! ```

pub mod asymptotics;
pub mod cli;
pub mod continuation;
pub mod error;
pub mod model;
pub mod observables;
pub mod system;
pub mod tolerance;
pub mod verify;
pub mod wavefunction;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::continuation::{
        critical_class, find_critical, solve_state, spectrum, trace_root, CriticalClass,
        CriticalPoint, TraceOptions, Trajectory,
    };
    pub use crate::error::{Error, Result};
    pub use crate::model::{BranchCoords, Coupling, Momenta, QuantumLabel, StateSolution};
    pub use crate::observables::{density_grid, norm_squared, potential_expectation};
    pub use crate::wavefunction::{amplitudes, psi, ConfigurationPoint};
}
