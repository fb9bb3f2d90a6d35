// SPDX-License-Identifier: Apache-2.0

//! Shared benchmark inputs.

use hybridcec::benchgen::{generate, middle_output_miter, GenSpec};
use hybridcec::netlist::{build_miter, Aig, Cone};

/// Cone of the middle output of array vs columnwise multipliers.
pub fn middle_output_cone(width: usize) -> Cone {
    let m = middle_output_miter(width);
    Cone::of_literal(&m, m.outputs()[0])
}

/// Full miter of two multiplier architectures.
pub fn multiplier_miter(width: usize) -> Aig {
    build_miter(
        &generate(&GenSpec::MultArray { width }).unwrap(),
        &generate(&GenSpec::MultColumnwise { width }).unwrap(),
    )
    .unwrap()
}

/// `copies` multiplier blocks against identically rewritten copies.
pub fn replicated_miter(width: usize, copies: usize) -> Aig {
    let base = GenSpec::MultArray { width };
    let a = generate(&GenSpec::Replicated {
        block: Box::new(base.clone()),
        copies,
    })
    .unwrap();
    let b = generate(&GenSpec::Replicated {
        block: Box::new(GenSpec::Rewrite {
            base: Box::new(base),
            steps: 30,
            seed: 3,
        }),
        copies,
    })
    .unwrap();
    build_miter(&a, &b).unwrap()
}
