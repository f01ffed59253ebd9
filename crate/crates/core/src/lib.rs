//! Self-delimiting (prefix-free) machines and the analyses they support:
//! budgeted interpretation, domain exploration with exact Kraft accounting,
//! a canonical machine enumeration with a prefix-universal machine on top,
//! halting-probability intervals in exact dyadic arithmetic, prefix-complexity
//! upper bounds, online Kraft-Chaitin codeword allocation, and primitive
//! recursive gate machines.
//!
//! Everything in this crate is deterministic and allocation-only (`no_std`
//! compatible). All measure arithmetic is exact; there is no floating point.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bits;
pub mod complexity;
pub mod dyadic;
pub mod enumeration;
pub mod explore;
pub mod forge;
pub mod gamma;
pub mod gate;
pub mod kraft;
pub mod machine;
pub mod omega;
pub mod pr;

pub use bits::{check_prefix_free, nat_to_string, string_to_nat, BitString};
pub use dyadic::{kraft_sum, Dyadic};
pub use enumeration::{
    decode_machine, encode_machine, run_universal, simulation_constant, u_encode, DecodedMachine,
    MachineIndex, PrintMachine, Universal,
};
pub use explore::{explore_domain, DomainReport, HaltInfo};
pub use machine::{
    run_machine, CodebookMachine, DivergeMachine, Machine, MachineRun, RunResult, StepEvent,
    TableMachine,
};
pub use omega::{
    certified_bits, default_schedule, halting_from_omega, omega_bounds, omega_exact, HaltingTable,
    OmegaInterval, OracleOutcome,
};

pub use num_bigint::BigUint;
