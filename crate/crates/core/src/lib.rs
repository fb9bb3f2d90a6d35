// SPDX-License-Identifier: Apache-2.0

pub mod benchgen;
pub mod eps;
pub mod interrupt;
pub mod isd;
pub mod logicsim;
pub mod netlist;
pub mod report;
pub mod sat;
pub mod selector;
pub mod simvec;
pub mod sweeper;
