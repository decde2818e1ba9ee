//! The monomial normalizer of the order-15 shift on six 15-cycles.
//!
//! On the 90 coordinates carrying six 15-cycles of sigma, the group that
//! normalizes <sigma> and preserves the block structure is generated by
//! permutations of the six blocks, independent cyclic shifts inside each
//! block, and decimations i -> t*i for t invertible mod 15. Equivalences
//! induced by this group preserve sigma-invariance, weight distributions
//! and minimum distance, so the search only ever certifies one candidate
//! per orbit.
//!
//! An element acts on a vector of ring elements (a_0, ..., a_5) in
//! F2[x]/(x^15 - 1)^6 by
//!
//!   nu(a)_b = x^{s_b} * mu_t(a_{tau^{-1}(b)})
//!
//! where mu_t(p(x)) = p(x^t). On binary coordinates, writing coordinate
//! 15j + i for the coefficient of x^i in block j, this is the permutation
//! (j, i) -> (tau(j), t*i + s_{tau(j)} mod 15). The decimations with t a
//! power of 2 restrict to the field Frobenius on every component; the
//! coset 14 * {1, 2, 4, 8} contains the reversal x -> x^{-1}, which
//! swaps the two order-15 components and fixes the others setwise.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::compcodes::cases::partner;
use crate::compcodes::inventory::Inventory;
use crate::compcodes::ComponentCode;
use crate::gf2core::Perm;
use crate::ringalg::{ComponentField, RingPoly};

/// The invertible residues mod 15: the Frobenius coset {1, 2, 4, 8}
/// followed by the reversal coset 14 * {8, 4, 2, 1}.
pub const DECIMATIONS: [usize; 8] = [1, 2, 4, 8, 7, 11, 13, 14];

/// Decimations that swap the two order-15 components.
pub fn is_reversal(t: usize) -> bool {
    matches!(t, 7 | 11 | 13 | 14)
}

fn decimation_pos(t: usize) -> usize {
    DECIMATIONS
        .iter()
        .position(|&d| d == t)
        .expect("decimation exponent must be invertible mod 15")
}

fn inv_mod_15(t: usize) -> usize {
    (1..15).find(|&u| (t * u) % 15 == 1).expect("unit mod 15")
}

/// One element of the normalizer: block permutation `tau` (block j moves
/// to block tau[j]), per-block shifts indexed by the *target* block, and
/// a decimation exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub tau: [usize; 6],
    pub shifts: [usize; 6],
    pub frob: usize,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { tau: [0, 1, 2, 3, 4, 5], shifts: [0; 6], frob: 1 }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// self after `first`: apply `first`, then `self`.
    pub fn compose(&self, first: &GroupElement) -> GroupElement {
        let mut tau = [0usize; 6];
        for j in 0..6 {
            tau[j] = self.tau[first.tau[j]];
        }
        let mut tau_inv = [0usize; 6];
        for j in 0..6 {
            tau_inv[self.tau[j]] = j;
        }
        let mut shifts = [0usize; 6];
        for v in 0..6 {
            shifts[v] = (self.frob * first.shifts[tau_inv[v]] + self.shifts[v]) % 15;
        }
        GroupElement { tau, shifts, frob: (self.frob * first.frob) % 15 }
    }

    pub fn inverse(&self) -> GroupElement {
        let ti = inv_mod_15(self.frob);
        let mut tau = [0usize; 6];
        for j in 0..6 {
            tau[self.tau[j]] = j;
        }
        let mut shifts = [0usize; 6];
        for u in 0..6 {
            shifts[u] = (15 - (ti * self.shifts[self.tau[u]]) % 15) % 15;
        }
        GroupElement { tau, shifts, frob: ti }
    }

    /// The induced permutation of the 90 coordinates in the 15-cycles.
    pub fn binary_perm(&self) -> Perm {
        let mut map = vec![0usize; 90];
        for j in 0..6 {
            let b = self.tau[j];
            for i in 0..15 {
                map[15 * j + i] = 15 * b + (self.frob * i + self.shifts[b]) % 15;
            }
        }
        Perm::from_map(map)
    }

    /// Extension to 96 coordinates with two 3-cycles at the tail.
    /// Decimation acts as i -> t*i inside each 3-cycle; `swap_tail`
    /// optionally exchanges the two 3-cycles (an extra symmetry of the
    /// tail that the 90-coordinate group does not see).
    pub fn binary_perm_96(&self, swap_tail: bool) -> Perm {
        let mut map = vec![0usize; 96];
        let base = self.binary_perm();
        for p in 0..90 {
            map[p] = base.apply(p);
        }
        for blk in 0..2 {
            let src = 90 + 3 * blk;
            let dst = if swap_tail { 90 + 3 * (1 - blk) } else { src };
            for u in 0..3 {
                map[src + u] = dst + (self.frob * u) % 3;
            }
        }
        Perm::from_map(map)
    }

    /// Image of a component code over F4 or F16 living on the order-3 or
    /// order-5 part of the ring, where every decimation acts setwise.
    pub fn act_component(&self, code: &ComponentCode) -> ComponentCode {
        let tabs = entry_maps();
        let field = code.field();
        let mapped: Vec<Vec<u8>> = code
            .rows()
            .iter()
            .map(|row| {
                let mut out = vec![0u8; row.len()];
                for (j, &a) in row.iter().enumerate() {
                    out[self.tau[j]] = tabs.map(field, self.frob, a);
                }
                out
            })
            .collect();
        ComponentCode::new(field.clone(), code.n(), mapped).shifted_cols(&self.shifts)
    }

    /// Image of a dual pair of order-15 component codes, presented by its
    /// first member. Frobenius decimations keep both members in place;
    /// reversal decimations swap them, so the image's first member comes
    /// from the partner code.
    pub fn act_pair(&self, inv: &Inventory, mprime: &ComponentCode) -> ComponentCode {
        let tabs = entry_maps();
        let source = if is_reversal(self.frob) { partner(inv, mprime) } else { mprime.clone() };
        let field = source.field().clone();
        let mapped: Vec<Vec<u8>> = source
            .rows()
            .iter()
            .map(|row| {
                let mut out = vec![0u8; row.len()];
                for (j, &a) in row.iter().enumerate() {
                    out[self.tau[j]] = tabs.map(&field, self.frob, a);
                }
                out
            })
            .collect();
        ComponentCode::new(inv.h_field.clone(), source.n(), mapped).shifted_cols(&self.shifts)
    }
}

/// Per-component lookup tables for the decimation maps mu_t.
///
/// Entry indices follow the component-code convention (0 is zero, d + 1
/// is the d-th power of the component generator). For the order-15
/// components the table under a reversal decimation is indexed in the
/// source field and produces indices in the partner field.
pub struct DecimationTables {
    g1: Vec<[u8; 4]>,
    g2: Vec<[u8; 16]>,
    h: Vec<[u8; 16]>,
    hs: Vec<[u8; 16]>,
}

impl DecimationTables {
    pub fn map(&self, field: &Arc<ComponentField>, t: usize, a: u8) -> u8 {
        let p = decimation_pos(t);
        let coset = &field.component.coset;
        if coset.contains(&5) {
            self.g1[p][a as usize]
        } else if coset.contains(&3) {
            self.g2[p][a as usize]
        } else if coset.contains(&1) {
            self.h[p][a as usize]
        } else {
            self.hs[p][a as usize]
        }
    }
}

fn decimate(v: RingPoly, t: usize) -> RingPoly {
    let mut mask = 0u64;
    for i in 0..15 {
        if v.coeff(i) {
            mask |= 1 << ((t * i) % 15);
        }
    }
    RingPoly::from_mask(15, mask)
}

fn build_table<const Q: usize>(
    src: &ComponentField,
    straight: &ComponentField,
    crossed: &ComponentField,
) -> Vec<[u8; Q]> {
    DECIMATIONS
        .iter()
        .map(|&t| {
            let target = if is_reversal(t) { crossed } else { straight };
            let mut tab = [0u8; Q];
            for a in 0..Q as u8 {
                tab[a as usize] = target
                    .index_of(decimate(src.element(a), t))
                    .expect("decimation permutes component elements");
            }
            tab
        })
        .collect()
}

static TABLES: OnceLock<DecimationTables> = OnceLock::new();

pub fn entry_maps() -> &'static DecimationTables {
    TABLES.get_or_init(|| {
        let inv = Inventory::get();
        DecimationTables {
            g1: build_table::<4>(&inv.g1_field, &inv.g1_field, &inv.g1_field),
            g2: build_table::<16>(&inv.g2_field, &inv.g2_field, &inv.g2_field),
            h: build_table::<16>(&inv.h_field, &inv.h_field, &inv.hs_field),
            hs: build_table::<16>(&inv.hs_field, &inv.hs_field, &inv.h_field),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compcodes::cases::pair_image;
    use crate::decomp::random_hermitian_self_dual;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_element(rng: &mut ChaCha8Rng) -> GroupElement {
        let mut tau = [0usize, 1, 2, 3, 4, 5];
        for j in (1..6).rev() {
            tau.swap(j, rng.gen_range(0..=j));
        }
        let mut shifts = [0usize; 6];
        for s in &mut shifts {
            *s = rng.gen_range(0..15);
        }
        GroupElement { tau, shifts, frob: DECIMATIONS[rng.gen_range(0..8)] }
    }

    #[test]
    fn group_axioms_match_the_binary_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let id = GroupElement::identity();
        assert_eq!(id.binary_perm(), Perm::identity(90));
        for _ in 0..40 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let c = random_element(&mut rng);
            // compose applies its argument first.
            assert_eq!(
                a.compose(&b).binary_perm(),
                b.binary_perm().then(&a.binary_perm())
            );
            assert_eq!(
                a.compose(&b).compose(&c),
                a.compose(&b.compose(&c))
            );
            assert_eq!(a.compose(&a.inverse()), id);
            assert_eq!(a.inverse().compose(&a), id);
            assert_eq!(a.inverse().binary_perm(), a.binary_perm().inverse());
        }
    }

    #[test]
    fn extension_to_96_coordinates_is_a_homomorphism_too() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..20 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            assert_eq!(
                a.compose(&b).binary_perm_96(false),
                b.binary_perm_96(false).then(&a.binary_perm_96(false))
            );
        }
    }

    #[test]
    fn decimation_tables_agree_with_frobenius_and_conjugation() {
        let inv = Inventory::get();
        let tabs = entry_maps();
        // Squaring in the ring is the field Frobenius on each component.
        for field in [&inv.g1_field, &inv.g2_field, &inv.h_field, &inv.hs_field] {
            for a in 0..field.q() as u8 {
                assert_eq!(tabs.map(field, 2, a), field.frobenius(a));
                assert_eq!(tabs.map(field, 1, a), a);
            }
        }
        // x -> x^{-1} is conjugation: it fixes the self-paired components
        // and crosses the order-15 pair index-stably.
        for a in 0..16u8 {
            assert_eq!(tabs.map(&inv.g2_field, 14, a), inv.g2_field.conj(a));
            assert_eq!(tabs.map(&inv.h_field, 14, a), inv.h_field.conj_into(&inv.hs_field, a));
        }
        for a in 0..4u8 {
            assert_eq!(tabs.map(&inv.g1_field, 14, a), inv.g1_field.conj(a));
        }
    }

    /// The convention-pinning test: acting on the component code and then
    /// taking binary images must equal permuting the binary image.
    #[test]
    fn component_action_matches_the_binary_permutation() {
        let inv = Inventory::get();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for trial in 0..12 {
            let nu = random_element(&mut rng);

            let m2 = random_hermitian_self_dual(&inv.g2_field, 6, &mut rng);
            assert_eq!(
                nu.act_component(&m2).binary_image(),
                m2.binary_image().permuted(&nu.binary_perm())
            );

            let m1 = random_hermitian_self_dual(&inv.g1_field, 6, &mut rng);
            assert_eq!(
                nu.act_component(&m1).binary_image(),
                m1.binary_image().permuted(&nu.binary_perm())
            );

            let mprime = &inv.case1_reps[trial % inv.case1_reps.len()];
            assert_eq!(
                pair_image(inv, &nu.act_pair(inv, mprime)),
                pair_image(inv, mprime).permuted(&nu.binary_perm())
            );
        }
    }

    #[test]
    fn action_preserves_hermitian_self_duality() {
        let inv = Inventory::get();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..8 {
            let nu = random_element(&mut rng);
            let m2 = random_hermitian_self_dual(&inv.g2_field, 6, &mut rng);
            assert!(nu.act_component(&m2).is_hermitian_self_dual());
        }
    }

    #[test]
    fn pair_action_composes() {
        let inv = Inventory::get();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for trial in 0..10 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let mprime = &inv.case1_reps[trial % inv.case1_reps.len()];
            assert_eq!(
                a.compose(&b).act_pair(inv, mprime),
                a.act_pair(inv, &b.act_pair(inv, mprime))
            );
        }
    }
}
