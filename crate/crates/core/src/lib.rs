//! Exact-arithmetic toolkit for finite quantum logics: states, conditional
//! states, s-maps, and joint statistics of discrete observables that need not
//! be compatible.

pub mod checks;
pub mod generate;
pub mod lattice;
pub mod model;
pub mod observable;
pub mod rational;
pub mod repro;
pub mod smap;
pub mod state;

pub use lattice::{Element, ElementSet, LogicError, QuantumLogic};
pub use observable::{DiscreteObservable, ObservableError, StatsReport};
pub use rational::Rational;
pub use smap::{SMap, SMapError};
pub use state::{ConditionalState, ConditionalSystem, State, StateError};
