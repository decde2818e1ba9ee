//! Cycle-structure arithmetic: which shapes an order-15 automorphism of a
//! binary doubly-even self-dual [96, 48, 20] code can have.
//!
//! An automorphism of composite order constrains itself through its powers:
//! sigma^3 has order 5 and sigma^5 has order 3, and both powers act on the
//! same 96 coordinates. Counting how the cycles of sigma split under these
//! powers, together with the known admissible types of order-5 and order-3
//! automorphisms at this length, pins the cycle counts down to two shapes.

use crate::decomp::CycleStructure;
use serde::{Deserialize, Serialize};

/// Cycle counts of a candidate order-15 automorphism: `c` fifteen-cycles,
/// `t5` five-cycles, `t3` three-cycles and `f` fixed points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaStructure {
    pub c: usize,
    pub t5: usize,
    pub t3: usize,
    pub f: usize,
}

impl SigmaStructure {
    pub fn n(&self) -> usize {
        15 * self.c + 5 * self.t5 + 3 * self.t3 + self.f
    }

    /// Coordinate layout with the longest cycles first, the convention the
    /// projection and shortening helpers expect.
    pub fn cycle_structure(&self) -> CycleStructure {
        let mut lengths = Vec::new();
        lengths.extend(std::iter::repeat(15).take(self.c));
        lengths.extend(std::iter::repeat(5).take(self.t5));
        lengths.extend(std::iter::repeat(3).take(self.t3));
        lengths.extend(std::iter::repeat(1).take(self.f));
        CycleStructure::from_lengths(lengths)
    }

    /// Short tag used in reports: the shape is determined by f here.
    pub fn label(&self) -> String {
        format!("f{}", self.f)
    }
}

/// The power-type constraints at length 96.
///
/// sigma^3 must be an order-5 automorphism of type 5-(18, 6): each
/// fifteen-cycle of sigma contributes three 5-cycles, each five-cycle one,
/// and three-cycles and fixed points stay fixed, so 3c + t5 = 18 and
/// 3 t3 + f = 6. sigma^5 must be an order-3 automorphism of type
/// 3-(30, 6) or 3-(32, 0): each fifteen-cycle now contributes five
/// 3-cycles and each three-cycle one, so 5c + t3 is 30 or 32 with
/// 5 t5 + f = 6 or 0 respectively.
pub fn satisfies_power_constraints(s: &SigmaStructure) -> bool {
    let SigmaStructure { c, t5, t3, f } = *s;
    s.n() == 96
        && 3 * c + t5 == 18
        && 3 * t3 + f == 6
        && ((5 * c + t3 == 30 && 5 * t5 + f == 6) || (5 * c + t3 == 32 && 5 * t5 + f == 0))
}

/// All cycle shapes an order-15 automorphism can have on 96 coordinates,
/// given the admissible types of its third and fifth powers. Exactly two
/// survive: six fifteen-cycles with two three-cycles, and six
/// fifteen-cycles with six fixed points.
pub fn derive_sigma_structure() -> Vec<SigmaStructure> {
    let mut out = Vec::new();
    for c in 0..=96 / 15 {
        for t5 in 0..=(96 - 15 * c) / 5 {
            for t3 in 0..=(96 - 15 * c - 5 * t5) / 3 {
                let f = 96 - 15 * c - 5 * t5 - 3 * t3;
                let s = SigmaStructure { c, t5, t3, f };
                if satisfies_power_constraints(&s) {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_two_shapes_survive() {
        let shapes = derive_sigma_structure();
        assert_eq!(
            shapes,
            vec![
                SigmaStructure { c: 6, t5: 0, t3: 0, f: 6 },
                SigmaStructure { c: 6, t5: 0, t3: 2, f: 0 },
            ]
        );
        assert!(shapes.iter().all(|s| s.n() == 96));
        assert_eq!(shapes[0].label(), "f6");
        assert_eq!(shapes[1].label(), "f0");
    }

    #[test]
    fn two_three_cycles_with_three_fixed_points_is_impossible() {
        // (t3, f) = (1, 3) satisfies 3 t3 + f = 6 on its own, but no number
        // of fifteen-cycles completes it: 5c + t3 = 30 or 32 would need
        // 5c = 29 or 31.
        for c in 0..=6 {
            for t5 in 0..=18 {
                let s = SigmaStructure { c, t5, t3: 1, f: 3 };
                assert!(!satisfies_power_constraints(&s));
            }
        }
        assert_eq!(3 * 1 + 3, 6);
    }

    #[test]
    fn fifteen_cycle_count_is_forced_to_six() {
        for s in derive_sigma_structure() {
            assert_eq!((s.c, s.t5), (6, 0));
        }
    }

    /// Independent oracle: realize each shape as a concrete permutation
    /// and count the cycles of its third and fifth powers directly.
    #[test]
    fn power_types_check_out_on_real_permutations() {
        for s in derive_sigma_structure() {
            let sigma = s.cycle_structure().permutation();
            assert_eq!(sigma.order(), 15);

            let cube = sigma.pow(3);
            let fives = cube.cycles().iter().filter(|c| c.len() == 5).count();
            let fixed5 = cube.cycles().iter().filter(|c| c.len() == 1).count();
            assert_eq!((fives, fixed5), (18, 6));

            let fifth = sigma.pow(5);
            let threes = fifth.cycles().iter().filter(|c| c.len() == 3).count();
            let fixed3 = fifth.cycles().iter().filter(|c| c.len() == 1).count();
            let expected = if s.f == 0 { (32, 0) } else { (30, 6) };
            assert_eq!((threes, fixed3), expected);
        }
    }

    #[test]
    fn layouts_match_the_decomposition_presets() {
        let shapes = derive_sigma_structure();
        assert_eq!(shapes[0].cycle_structure().lengths(), CycleStructure::order15_f6().lengths());
        assert_eq!(shapes[1].cycle_structure().lengths(), CycleStructure::order15_f0().lengths());
    }
}
