use proptest::prelude::*;

use colorcode::anyons::{color_code_theory, condense, VACUUM};
use colorcode::lattice::{build_hex_torus, Color, ColorLattice, TorusSpec};
use colorcode::models::{perturbed_h, plaquette_z, Couplings};
use colorcode::observables::{build_string, classify_phase, PhaseLabel};
use colorcode::pauli::commutes;
use colorcode::transform::{rewrite, structurally_equal, transform_h_ising, FrameSpec};

fn torus(l1: usize, l2: usize) -> ColorLattice {
    build_hex_torus(TorusSpec::new(l1, l2).unwrap()).unwrap()
}

fn color() -> impl Strategy<Value = Color> {
    (0usize..3).prop_map(Color::from_index)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn strings_violate_only_their_endpoints(c in color(), a in 0usize..12, b in 0usize..12) {
        let lat = torus(6, 6);
        let ps: Vec<usize> = lat.plaquettes_of(c).collect();
        prop_assume!(a != b);
        let (i, j) = (ps[a], ps[b]);
        let s = build_string(&lat, c, i, j).unwrap();
        for p in 0..lat.plaquettes().len() {
            let anticommutes = !commutes(&s.operator, &plaquette_z(&lat, p)).unwrap();
            prop_assert_eq!(anticommutes, p == i || p == j);
        }
    }

    #[test]
    fn ising_rewrite_preserves_commutation(
        jr in 0.0f64..=1.0, jg in 0.0f64..=1.0, jb in 0.0f64..=1.0,
        x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>(),
    ) {
        let lat = torus(3, 6);
        let h = perturbed_h(&lat, Couplings::new(jr, jg, jb).unwrap()).unwrap().hamiltonian;
        let terms = h.terms();
        let (p, q) = (&terms[x.index(terms.len())].op, &terms[y.index(terms.len())].op);
        let frame = FrameSpec::ising(&lat);
        let (rp, rq) = (rewrite(p, &frame).unwrap(), rewrite(q, &frame).unwrap());
        let image_commutes = rp.image.terms().iter().all(|a| {
            rq.image.terms().iter().all(|b| commutes(&a.op, &b.op).unwrap())
        });
        prop_assert_eq!(commutes(p, q).unwrap(), image_commutes);
    }

    #[test]
    fn each_tfim_sees_only_its_own_coupling(
        j in prop::array::uniform3(0.0f64..=1.0), other in prop::array::uniform3(0.0f64..=1.0),
        c in color(),
    ) {
        let lat = torus(3, 3);
        let mut k = other;
        k[c.index()] = j[c.index()];
        let a = transform_h_ising(&perturbed_h(&lat, Couplings::new(j[0], j[1], j[2]).unwrap()).unwrap()).unwrap();
        let b = transform_h_ising(&perturbed_h(&lat, Couplings::new(k[0], k[1], k[2]).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(a.constant, b.constant);
        prop_assert!(structurally_equal(&a.tfims[c.index()], &b.tfims[c.index()]));
    }

    #[test]
    fn classification_is_color_covariant(
        s in prop::array::uniform3(0.0f64..=1.0), perm in 0usize..6,
    ) {
        let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let sigma = orders[perm].map(Color::from_index);
        let mut permuted = [0.0; 3];
        for c in 0..3 {
            permuted[sigma[c].index()] = s[c];
        }
        let expected = match classify_phase(s, 0.5) {
            PhaseLabel::ToricCode(c) => PhaseLabel::ToricCode(sigma[c.index()]),
            PhaseLabel::PartiallyTopological(c) => PhaseLabel::PartiallyTopological(sigma[c.index()]),
            other => other,
        };
        prop_assert_eq!(classify_phase(permuted, 0.5), expected);
    }

    #[test]
    fn fusion_is_a_group(a in 0usize..16, b in 0usize..16, c in 0usize..16) {
        let t = color_code_theory();
        prop_assert_eq!(t.fuse(a, b), t.fuse(b, a));
        prop_assert_eq!(t.fuse(t.fuse(a, b), c), t.fuse(a, t.fuse(b, c)));
        prop_assert_eq!(t.fuse(a, VACUUM), a);
        prop_assert_eq!(t.fuse(a, a), VACUUM);
        // Braiding is bilinear and the spin is a quadratic refinement of it.
        prop_assert_eq!(t.braid(t.fuse(a, b), c), t.braid(a, c) * t.braid(b, c));
        prop_assert_eq!(t.spin(t.fuse(a, b)), t.spin(a) * t.spin(b) * t.braid(a, b));
    }

    #[test]
    fn condensing_a_boson_quarters_the_theory(a in 1usize..16) {
        let t = color_code_theory();
        prop_assume!(t.is_boson(a));
        let r = condense(&t, &[a]).unwrap();
        prop_assert_eq!(r.algebra.len(), 2);
        prop_assert_eq!(r.quotient.size(), 4);
        prop_assert_eq!(r.confined.len(), 8);
    }
}
