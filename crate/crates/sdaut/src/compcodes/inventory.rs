//! Pinned component codes and fields for r = 15, validated on first use.
//!
//! Generator conventions matter: dlog matrices below are written against
//! explicit ring elements, not whatever primitive element a search happens
//! to find first, so the tables stay byte-identical across runs.
//!
//! * G1 (coset {5,10}, F4): generator w = x*e1, order 3.
//! * G2 (coset {3,6,9,12}, F16): generator m = 1+x+x^5+x^6+x^10+x^11,
//!   order 15; x*e2 = m^12 has order 5, so in-block shifts only reach the
//!   cubes of G2*.
//! * H (coset {1,2,4,8}, F16): generator x*e, order 15; every scaling is a
//!   shift. H* (coset {7,11,13,14}) gets conj(x*e) = x^14*e*, so the
//!   conjugation map between the pair preserves dlogs.

use super::{canonical_key, ComponentCode};
use crate::gf2core::BinaryCode;
use crate::ringalg::{factor_cyclic, ComponentField, CyclicFactorization, RingPoly};
use std::sync::{Arc, OnceLock};

pub struct Inventory {
    pub fz: CyclicFactorization,
    pub g1_field: Arc<ComponentField>,
    pub g2_field: Arc<ComponentField>,
    pub h_field: Arc<ComponentField>,
    pub hs_field: Arc<ComponentField>,
    /// The two classes of Hermitian self-dual [6,3] codes over G2 whose
    /// binary preimages are doubly-even with weight >= 20.
    pub h1: ComponentCode,
    pub h2: ComponentCode,
    /// Representatives of the four classes of Hermitian self-orthogonal
    /// [6,2] codes over G1.
    pub h3: ComponentCode,
    pub h4: ComponentCode,
    pub h5: ComponentCode,
    pub h6: ComponentCode,
    /// The two classes of Hermitian self-dual [6,3] codes over G1.
    pub i2cubed: ComponentCode,
    pub hexacode: ComponentCode,
    /// Extended Hamming [8,4,4], the unique doubly-even self-dual length-8
    /// binary code; glue target for the fixed subcode in the f = 0 case.
    pub e8: BinaryCode,
    /// [12,6,4] self-dual, not doubly-even; fixed-subcode target when the
    /// automorphism has type 3-(28,12).
    pub d12plus: BinaryCode,
    /// The four classes of [6,2,5] MDS codes over H that occur as M' when
    /// dim M' = 2.
    pub case1_reps: Vec<ComponentCode>,
}

static INSTANCE: OnceLock<Inventory> = OnceLock::new();

impl Inventory {
    pub fn get() -> &'static Inventory {
        INSTANCE.get_or_init(Inventory::load)
    }

    fn load() -> Inventory {
        let fz = factor_cyclic(15).expect("r = 15 is odd and in range");
        let comp = |s: usize| fz.component_by_coset_rep(s).expect("coset rep");

        let c1 = comp(5);
        let g1_gen = c1.idempotent.shift(1);
        let g1_field = Arc::new(ComponentField::with_generator(15, c1, g1_gen).unwrap());

        let c2 = comp(3);
        let g2_gen = RingPoly::from_exps(15, &[0, 1, 5, 6, 10, 11]);
        let g2_field = Arc::new(ComponentField::with_generator(15, c2, g2_gen).unwrap());

        let ch = comp(1);
        let h_gen = ch.idempotent.shift(1);
        let h_field = Arc::new(ComponentField::with_generator(15, ch, h_gen).unwrap());

        let chs = comp(7);
        let hs_gen = h_gen.conj();
        let hs_field = Arc::new(ComponentField::with_generator(15, chs, hs_gen).unwrap());

        // x acts on G2 as m^12 (order 5) and with full order on H.
        assert_eq!(g2_field.dlog(g2_field.x_index()), Some(12));
        assert_eq!(h_field.dlog(h_field.x_index()), Some(1));
        // Conjugation on a degree-4 self-reciprocal component is a -> a^4.
        assert_eq!(g2_field.conj(g2_field.from_dlog(1)), g2_field.from_dlog(4));
        // The paired generators are conjugates, so conj_into is dlog-stable.
        for d in 0..15 {
            let a = h_field.from_dlog(d);
            assert_eq!(h_field.conj_into(&hs_field, a), hs_field.from_dlog(d));
        }

        let code = |f: &Arc<ComponentField>, rows: &[&[u8]]| {
            ComponentCode::new(f.clone(), 6, rows.iter().map(|r| r.to_vec()).collect())
        };
        // Entry convention: 0 = zero, d+1 = generator^d.
        let h1 = code(
            &g2_field,
            &[
                &[1, 0, 0, 0, 6, 11],
                &[0, 1, 0, 6, 6, 1],
                &[0, 0, 1, 11, 1, 11],
            ],
        );
        let h2 = code(
            &g2_field,
            &[
                &[1, 0, 0, 1, 6, 6],
                &[0, 1, 0, 1, 3, 9],
                &[0, 0, 1, 1, 7, 10],
            ],
        );
        let h3 = code(&g1_field, &[&[1, 0, 1, 0, 0, 0], &[0, 1, 0, 1, 0, 0]]);
        let h4 = code(&g1_field, &[&[1, 0, 1, 1, 1, 0], &[0, 1, 1, 2, 3, 0]]);
        let h5 = code(&g1_field, &[&[1, 0, 1, 0, 0, 0], &[0, 1, 0, 1, 1, 1]]);
        let h6 = code(&g1_field, &[&[1, 0, 0, 1, 1, 1], &[0, 1, 1, 0, 1, 1]]);
        let i2cubed = code(
            &g1_field,
            &[
                &[1, 1, 0, 0, 0, 0],
                &[0, 0, 1, 1, 0, 0],
                &[0, 0, 0, 0, 1, 1],
            ],
        );
        let hexacode = code(
            &g1_field,
            &[
                &[1, 0, 0, 2, 1, 1],
                &[0, 1, 0, 1, 2, 1],
                &[0, 0, 1, 1, 1, 2],
            ],
        );

        let case1_reps: Vec<ComponentCode> = [(1u8, 2, 3), (1, 2, 4), (1, 3, 7), (1, 3, 11)]
            .iter()
            .map(|&(a, b, c)| {
                code(
                    &h_field,
                    &[&[1, 0, 1, 1, 1, 1], &[0, 1, 1, a + 1, b + 1, c + 1]],
                )
            })
            .collect();

        let e8 = BinaryCode::from_strings(&[
            "10000111", "01001011", "00101101", "00011110",
        ]);
        let d12plus = BinaryCode::from_strings(&[
            "100000011111",
            "010000101111",
            "001000110111",
            "000100111011",
            "000010111101",
            "000001111110",
        ]);

        let inv = Inventory {
            fz,
            g1_field,
            g2_field,
            h_field,
            hs_field,
            h1,
            h2,
            h3,
            h4,
            h5,
            h6,
            i2cubed,
            hexacode,
            e8,
            d12plus,
            case1_reps,
        };
        inv.validate();
        inv
    }

    fn validate(&self) {
        for (name, c, we) in [
            ("h1", &self.h1, [1u64, 0, 0, 30, 135, 1170, 2760]),
            ("h2", &self.h2, [1, 0, 0, 0, 225, 1080, 2790]),
        ] {
            assert!(c.is_hermitian_self_dual(), "{name} must be Hermitian self-dual");
            assert_eq!(c.weight_enumerator(), we, "{name} weight enumerator");
            let img = c.binary_image();
            assert_eq!((img.n(), img.k()), (90, 12));
            assert!(img.is_doubly_even(), "{name} image must be doubly-even");
            let d = img.weight_distribution().unwrap().min_nonzero_weight().unwrap();
            assert!(d >= 20, "{name} image weight {d} < 20");
        }
        let keys: Vec<_> = [&self.h3, &self.h4, &self.h5, &self.h6]
            .iter()
            .map(|c| {
                assert!(c.is_hermitian_self_orthogonal());
                assert_eq!(c.k(), 2);
                canonical_key(c, &[1, 2])
            })
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(keys[i], keys[j], "[6,2] reps {i},{j} must be inequivalent");
            }
        }
        assert!(self.i2cubed.is_hermitian_self_dual());
        assert_eq!(self.i2cubed.min_weight(), 2);
        assert!(self.hexacode.is_hermitian_self_dual());
        assert_eq!(self.hexacode.min_weight(), 4);
        for (i, c) in self.case1_reps.iter().enumerate() {
            assert_eq!(c.min_weight(), 5, "case-1 rep {i} must be [6,2,5]");
        }
        let c1keys: Vec<_> = self
            .case1_reps
            .iter()
            .map(|c| canonical_key(c, &[1, 2, 4, 8]))
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(c1keys[i], c1keys[j], "case-1 reps {i},{j} must differ");
            }
        }
        assert!(self.e8.is_self_dual() && self.e8.is_doubly_even());
        assert_eq!(
            self.e8.weight_distribution().unwrap().counts(),
            &[1, 0, 0, 0, 14, 0, 0, 0, 1]
        );
        assert!(self.d12plus.is_self_dual() && !self.d12plus.is_doubly_even());
        assert_eq!(
            self.d12plus
                .weight_distribution()
                .unwrap()
                .min_nonzero_weight(),
            Some(4)
        );
    }
}
