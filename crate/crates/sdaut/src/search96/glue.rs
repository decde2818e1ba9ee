//! Candidate universes and gluing maps.
//!
//! A candidate code is assembled from binary images of component codes
//! living on disjoint idempotent components of F2[x]/(x^15 - 1)^6, so the
//! parts are automatically pairwise orthogonal and the glued dimension is
//! the sum of the image dimensions. This module owns the three component
//! universes (dual pairs, order-5 components, order-3 components) plus
//! the self-dual tail patterns used on the two 3-cycles, the index
//! arithmetic that names every candidate, and content digests that pin
//! reports and resume tokens to the exact universes they were computed
//! over.
//!
//! The dual-pair representatives are rebuilt from their pinned defining
//! tuples rather than by re-running the class enumeration; structural
//! checks (counts, distinct canonical keys, the one dual-pair merge among
//! the usable dim-3 classes) guard the pinned material.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::compcodes::cases::{
    build_case1, build_case2, build_case3, pair_image, partner, FROBENIUS_F16, MDS_CLASS_DATA,
    NON_MDS_SURVIVOR_DATA,
};
use crate::compcodes::inventory::Inventory;
use crate::compcodes::sdenum::{
    hermitian_sd_codes, hermitian_so_codes, min_distance_at_least_3, x_monomial_classes,
};
use crate::compcodes::{canonical_key, ComponentCode};
use crate::decomp::{pi_expand, preimage_weight, CycleStructure};
use crate::gf2core::BinaryCode;
use crate::ringalg::{factor_cyclic, ComponentField};

use super::action::GroupElement;
use super::stab::pair_stabilizer;

/// One representative per admissible dual pair {M', M''}: the four
/// dim-2 classes, the ten usable dim-3 classes after merging the one
/// dual pair among them, and the eighteen usable dim-4 pair classes.
pub struct AMaterial {
    /// (case, defining tuple) per representative, sorted within case.
    pub labels: Vec<(u8, Vec<u8>)>,
    pub reps: Vec<ComponentCode>,
    /// Binary [90, 24] images of the pairs.
    pub images: Vec<BinaryCode>,
    stabs: Vec<OnceLock<Vec<GroupElement>>>,
}

impl AMaterial {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    /// Normalizer stabilizer of the pair, computed on first use.
    pub fn stab(&self, a_idx: usize) -> &[GroupElement] {
        self.stabs[a_idx].get_or_init(|| pair_stabilizer(Inventory::get(), &self.reps[a_idx]))
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (case, label) in &self.labels {
            h.update([*case]);
            h.update(label);
        }
        for rep in &self.reps {
            h.update(flatten(rep));
        }
        hex(&h.finalize())
    }
}

static A_MATERIAL: OnceLock<AMaterial> = OnceLock::new();

pub fn a_material() -> &'static AMaterial {
    A_MATERIAL.get_or_init(|| {
        let inv = Inventory::get();
        let mut labels: Vec<(u8, Vec<u8>)> = Vec::new();
        for l in [[1, 2, 3], [1, 2, 4], [1, 3, 7], [1, 3, 11]] {
            labels.push((1, l.to_vec()));
        }
        // Usable dim-3 classes: image minimum 20 means no weight-16
        // words. [1, 3, 2, 6] defines the dual of the [1, 2, 3, 6] class
        // (verified below), so only the lex-least of the two is kept.
        let mut case2: Vec<Vec<u8>> = MDS_CLASS_DATA
            .iter()
            .filter(|(label, counts)| counts[0] == 0 && *label != [1, 3, 2, 6])
            .map(|(label, _)| label.to_vec())
            .collect();
        case2.sort();
        assert_eq!(case2.len(), 10);
        labels.extend(case2.into_iter().map(|l| (2, l)));

        let mut case3: Vec<Vec<u8>> =
            NON_MDS_SURVIVOR_DATA.iter().map(|(label, _)| label.to_vec()).collect();
        case3.sort();
        assert_eq!(case3.len(), 18);
        labels.extend(case3.into_iter().map(|l| (3, l)));

        let reps: Vec<ComponentCode> = labels
            .iter()
            .map(|(case, label)| match case {
                1 => build_case1(inv, label),
                2 => build_case2(inv, label),
                _ => build_case3(inv, label),
            })
            .collect();

        let dropped = build_case2(inv, &[1, 3, 2, 6]);
        let kept = build_case2(inv, &[1, 2, 3, 6]);
        assert_eq!(
            canonical_key(&partner(inv, &dropped), &FROBENIUS_F16),
            canonical_key(&kept, &FROBENIUS_F16),
            "the dropped dim-3 tuple must define the partner of the kept one"
        );

        let images: Vec<BinaryCode> = reps.iter().map(|r| pair_image(inv, r)).collect();
        for img in &images {
            assert_eq!(img.k(), 24);
        }
        let stabs = (0..reps.len()).map(|_| OnceLock::new()).collect();
        AMaterial { labels, reps, images, stabs }
    })
}

/// The order-5 glue universe: every Hermitian self-dual [6, 3] code over
/// F16 whose minimum distance is at least 3, in enumeration order, with
/// its block-monomial class (the two classes are named after the
/// inventory representatives).
pub struct M2Universe {
    pub codes: Vec<ComponentCode>,
    /// 0 for the class of the first inventory representative, 1 for the
    /// second.
    pub class: Vec<u8>,
    pub digest: String,
    index: HashMap<Vec<u8>, u32>,
}

impl M2Universe {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn index_of(&self, code: &ComponentCode) -> Option<u32> {
        self.index.get(&flatten(code)).copied()
    }

    pub fn class_name(&self, m2_idx: u32) -> &'static str {
        if self.class[m2_idx as usize] == 0 {
            "H1"
        } else {
            "H2"
        }
    }
}

static M2_UNIVERSE: OnceLock<M2Universe> = OnceLock::new();

pub fn m2_universe() -> &'static M2Universe {
    M2_UNIVERSE.get_or_init(|| {
        let inv = Inventory::get();
        let codes: Vec<ComponentCode> = hermitian_sd_codes(&inv.g2_field, 6)
            .into_iter()
            .filter(min_distance_at_least_3)
            .collect();
        assert_eq!(codes.len(), 312_500);

        let (raw_class, n_classes) = x_monomial_classes(&codes, &FROBENIUS_F16);
        assert_eq!(n_classes, 2);
        let mut index = HashMap::with_capacity(codes.len());
        for (i, c) in codes.iter().enumerate() {
            let prev = index.insert(flatten(c), i as u32);
            assert!(prev.is_none());
        }
        let h1_raw = raw_class[index[&flatten(&inv.h1)] as usize];
        let class: Vec<u8> =
            raw_class.iter().map(|&c| if c == h1_raw { 0 } else { 1 }).collect();

        let mut h = Sha256::new();
        for c in &codes {
            h.update(flatten(c));
        }
        let digest = hex(&h.finalize());
        M2Universe { codes, class, digest, index }
    })
}

/// Hermitian self-orthogonal [6, 2] codes over F4: the order-3 component
/// in the shape with two 3-cycles.
pub fn m1_f0_universe() -> &'static Vec<ComponentCode> {
    static U: OnceLock<Vec<ComponentCode>> = OnceLock::new();
    U.get_or_init(|| {
        let inv = Inventory::get();
        let u = hermitian_so_codes(&inv.g1_field, 6, 2);
        assert_eq!(u.len(), 6237);
        u
    })
}

/// Hermitian self-dual [6, 3] codes over F4: the order-3 component in
/// the shape with six fixed points.
pub fn m1_f6_universe() -> &'static Vec<ComponentCode> {
    static U: OnceLock<Vec<ComponentCode>> = OnceLock::new();
    U.get_or_init(|| {
        let inv = Inventory::get();
        let u = hermitian_sd_codes(&inv.g1_field, 6);
        assert_eq!(u.len(), 891);
        u
    })
}

/// Self-dual [8, 4] patterns on the projected coordinates (six 15-cycles
/// then two 3-cycles) whose expanded nonzero words all weigh at least
/// 20. Exactly the 30 relabelings of the extended Hamming code survive.
pub fn fixed_templates_f0() -> &'static Vec<BinaryCode> {
    static T: OnceLock<Vec<BinaryCode>> = OnceLock::new();
    T.get_or_init(|| {
        let fz = factor_cyclic(1).unwrap();
        let comp = fz.component_by_coset_rep(0).unwrap();
        let f2 = Arc::new(ComponentField::new(1, comp).unwrap());
        let cs = CycleStructure::order15_f0();
        let out: Vec<BinaryCode> = hermitian_so_codes(&f2, 8, 4)
            .iter()
            .map(|code| {
                let rows = code
                    .rows()
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .fold(0u128, |w, (i, &b)| w | (b as u128) << i)
                    })
                    .collect();
                BinaryCode::new(8, rows).unwrap()
            })
            .filter(|code| {
                let mut ok = true;
                code.for_each_word(|w| {
                    if w != 0 && preimage_weight(w, &cs) < 20 {
                        ok = false;
                    }
                });
                ok
            })
            .collect();
        assert_eq!(out.len(), 30);
        out
    })
}

pub fn templates_digest() -> String {
    let mut h = Sha256::new();
    for t in fixed_templates_f0() {
        for &row in t.rows() {
            h.update(row.to_le_bytes());
        }
    }
    hex(&h.finalize())
}

/// Digest binding a report to every universe it enumerates.
pub fn universe_digest() -> String {
    let mut h = Sha256::new();
    h.update(a_material().digest());
    h.update(&m2_universe().digest);
    h.update(templates_digest());
    for c in m1_f0_universe().iter().chain(m1_f6_universe()) {
        h.update(flatten(c));
    }
    hex(&h.finalize())
}

/// Scan order of the [90, 36] stage: the order-5 component varies in the
/// outer loop so its binary image is built once per 32 candidates.
pub fn b9036_g(m2_idx: u32, a_idx: usize) -> u64 {
    m2_idx as u64 * 32 + a_idx as u64
}

pub fn b9036_indices(g: u64) -> (u32, usize) {
    ((g / 32) as u32, (g % 32) as usize)
}

pub fn b9036_universe_size() -> u64 {
    m2_universe().len() as u64 * a_material().len() as u64
}

/// Glue a dual-pair image with order-5 image rows: a [90, 36] code.
pub fn glue_9036(a_image: &BinaryCode, m2_rows: &[u128]) -> BinaryCode {
    let mut rows = a_image.rows().to_vec();
    rows.extend_from_slice(m2_rows);
    let code = BinaryCode::new(90, rows).unwrap();
    debug_assert_eq!(code.k(), 36);
    code
}

pub fn glue_9036_by_index(a_idx: usize, m2_idx: u32) -> BinaryCode {
    let a = a_material();
    let m2 = m2_universe();
    glue_9036(
        &a.images[a_idx],
        m2.codes[m2_idx as usize].binary_image().rows(),
    )
}

/// Extend a [90, 36] base across the two 3-cycles by a tail pattern:
/// a [96, 40] code invariant under six 15-cycles plus two 3-cycles.
pub fn glue_96_f0(base: &BinaryCode, template: &BinaryCode) -> BinaryCode {
    let cs = CycleStructure::order15_f0();
    let mut rows = base.rows().to_vec();
    rows.extend(pi_expand(template, &cs).rows());
    let code = BinaryCode::new(96, rows).unwrap();
    debug_assert_eq!(code.k(), 40);
    code
}

/// Adjoin an order-3 component to a stage-A candidate: a [96, 44] code.
pub fn glue_96_f0_m1(stage_a: &BinaryCode, m1_idx: u32) -> BinaryCode {
    let mut rows = stage_a.rows().to_vec();
    rows.extend(m1_f0_universe()[m1_idx as usize].binary_image().rows());
    let code = BinaryCode::new(96, rows).unwrap();
    debug_assert_eq!(code.k(), 44);
    code
}

/// Adjoin a self-dual order-3 component directly: a [90, 42] code.
pub fn glue_90_f6(base: &BinaryCode, m1_idx: u32) -> BinaryCode {
    let mut rows = base.rows().to_vec();
    rows.extend(m1_f6_universe()[m1_idx as usize].binary_image().rows());
    let code = BinaryCode::new(90, rows).unwrap();
    debug_assert_eq!(code.k(), 42);
    code
}

/// Name of every candidate the pipeline can examine, sufficient to
/// re-derive the candidate code from the pinned universes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateDescriptor {
    Base9036 { a_idx: u32, m2_idx: u32 },
    StageA { a_idx: u32, m2_idx: u32, template_idx: u32 },
    StageB { a_idx: u32, m2_idx: u32, template_idx: u32, m1_idx: u32 },
    CaseF6 { a_idx: u32, m2_idx: u32, m1_idx: u32 },
}

/// Re-derive the candidate a descriptor names.
pub fn candidate_code(d: &CandidateDescriptor) -> BinaryCode {
    match *d {
        CandidateDescriptor::Base9036 { a_idx, m2_idx } => {
            glue_9036_by_index(a_idx as usize, m2_idx)
        }
        CandidateDescriptor::StageA { a_idx, m2_idx, template_idx } => glue_96_f0(
            &glue_9036_by_index(a_idx as usize, m2_idx),
            &fixed_templates_f0()[template_idx as usize],
        ),
        CandidateDescriptor::StageB { a_idx, m2_idx, template_idx, m1_idx } => glue_96_f0_m1(
            &glue_96_f0(
                &glue_9036_by_index(a_idx as usize, m2_idx),
                &fixed_templates_f0()[template_idx as usize],
            ),
            m1_idx,
        ),
        CandidateDescriptor::CaseF6 { a_idx, m2_idx, m1_idx } => {
            glue_90_f6(&glue_9036_by_index(a_idx as usize, m2_idx), m1_idx)
        }
    }
}

pub fn descriptor_id(d: &CandidateDescriptor) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_string(d).unwrap());
    hex(&h.finalize())
}

pub(crate) fn flatten(code: &ComponentCode) -> Vec<u8> {
    let mut out = vec![code.k() as u8];
    for row in code.rows() {
        out.extend_from_slice(row);
    }
    out
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn a_material_has_the_expected_shape() {
        let a = a_material();
        assert_eq!(a.len(), 32);
        let per_case: Vec<usize> =
            [1u8, 2, 3].iter().map(|c| a.labels.iter().filter(|(k, _)| k == c).count()).collect();
        assert_eq!(per_case, vec![4, 10, 18]);

        let keys: BTreeSet<Vec<u8>> =
            a.reps.iter().map(|r| canonical_key(r, &FROBENIUS_F16)).collect();
        assert_eq!(keys.len(), 32, "representatives are pairwise inequivalent");

        let inv = Inventory::get();
        let mine: BTreeSet<Vec<u8>> =
            a.reps[..4].iter().map(|r| canonical_key(r, &FROBENIUS_F16)).collect();
        let pinned: BTreeSet<Vec<u8>> =
            inv.case1_reps.iter().map(|r| canonical_key(r, &FROBENIUS_F16)).collect();
        assert_eq!(mine, pinned);
    }

    #[test]
    fn tail_patterns_are_the_thirty_hamming_relabelings() {
        let inv = Inventory::get();
        let templates = fixed_templates_f0();
        assert_eq!(templates.len(), 30);
        assert!(templates.contains(&inv.e8));
        for t in templates {
            assert!(t.is_self_dual());
            assert!(t.is_doubly_even());
            let wd = t.weight_distribution().unwrap();
            assert_eq!(wd.counts(), &[1, 0, 0, 0, 14, 0, 0, 0, 1]);
        }
        let distinct: BTreeSet<Vec<u128>> =
            templates.iter().map(|t| t.rows().to_vec()).collect();
        assert_eq!(distinct.len(), 30);
    }

    #[test]
    fn glue_dimensions_and_invariance() {
        let inv = Inventory::get();
        let a = a_material();
        let sigma90 = CycleStructure::uniform(15, 6, 0).permutation();
        let sigma96 = CycleStructure::order15_f0().permutation();

        let base = glue_9036(&a.images[0], inv.h1.binary_image().rows());
        assert_eq!(base.k(), 36);
        assert!(base.is_self_orthogonal());
        assert!(base.is_doubly_even());
        assert_eq!(base.permuted(&sigma90), base);

        let wide = glue_96_f0(&base, &fixed_templates_f0()[0]);
        assert_eq!(wide.k(), 40);
        assert_eq!(wide.permuted(&sigma96), wide);

        let full = glue_96_f0_m1(&wide, 0);
        assert_eq!(full.k(), 44);
        assert_eq!(full.permuted(&sigma96), full);

        let f6 = glue_90_f6(&base, 0);
        assert_eq!(f6.k(), 42);
        assert!(f6.is_self_orthogonal());
        assert_eq!(f6.permuted(&sigma90), f6);
    }

    #[test]
    fn scan_index_roundtrip() {
        for g in [0u64, 1, 31, 32, 12_345_678] {
            let (m2_idx, a_idx) = b9036_indices(g);
            assert_eq!(b9036_g(m2_idx, a_idx), g);
        }
    }

    #[test]
    fn descriptor_ids_are_stable_and_distinct() {
        let a = CandidateDescriptor::Base9036 { a_idx: 3, m2_idx: 77 };
        let b = CandidateDescriptor::StageA { a_idx: 3, m2_idx: 77, template_idx: 0 };
        assert_eq!(descriptor_id(&a), descriptor_id(&a));
        assert_ne!(descriptor_id(&a), descriptor_id(&b));
        assert_eq!(descriptor_id(&a).len(), 64);
    }

    #[test]
    fn m2_universe_classes_follow_the_inventory_split() {
        let inv = Inventory::get();
        let m2 = m2_universe();
        assert_eq!(m2.len(), 312_500);
        assert_eq!(m2.digest.len(), 64);

        let h1_idx = m2.index_of(&inv.h1).unwrap();
        let h2_idx = m2.index_of(&inv.h2).unwrap();
        assert_eq!(m2.class[h1_idx as usize], 0);
        assert_eq!(m2.class[h2_idx as usize], 1);
        assert_eq!(m2.class_name(h1_idx), "H1");

        let n0 = m2.class.iter().filter(|&&c| c == 0).count();
        assert_eq!(n0, 125_000);
        assert_eq!(m2.len() - n0, 187_500);

        assert_eq!(m2.codes[4321].k(), 3);
        assert_eq!(m2.index_of(&m2.codes[4321]), Some(4321));
    }
}
