//! Acceptance battery: nine end-to-end criteria, one test (and one
//! pass/fail line) per criterion, all at exact arithmetic. Each test also
//! enforces its wall-clock budget so regressions in the exact kernels
//! surface here.

use mackeykit_core::chains::{
    compact_generation_probe, cp_example, fixed_point_complex, homotopy_classes_from_generator,
    is_contractible, is_gamma_acyclic,
};
use mackeykit_core::corpus::corpus;
use mackeykit_core::group::{all_subgroups, double_cosets, Group, Subgroup};
use mackeykit_core::gset::GSet;
use mackeykit_core::io::{canonical_json, subgroup_from_elements};
use mackeykit_core::linalg::{kernel_basis_field, rank};
use mackeykit_core::mackey::{
    check_cohomological, fp_functor, gmodule_hom_rank, nat_transforms, omega_from_mackey,
    omega_representable, rho, yoneda, Cohomologicality, GModule,
};
use mackeykit_core::matrix::Mat;
use mackeykit_core::perm::{
    hom_basis, inflation_double_coset_check, mackey_formula_set_check,
    quotient_equivalence_check, tensor_decompose,
};
use mackeykit_core::ring::Ring;
use mackeykit_core::suite::{lifting_trial, run_suite};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::{Duration, Instant};

fn test_groups() -> Vec<(&'static str, Arc<Group>)> {
    vec![
        ("C2", Group::cyclic(2)),
        ("C3", Group::cyclic(3)),
        ("C4", Group::cyclic(4)),
        ("C6", Group::cyclic(6)),
        ("S3", Group::symmetric(3)),
        ("D4", Group::dihedral(4)),
    ]
}

fn test_rings() -> Vec<Ring> {
    vec![
        Ring::PrimeField(2),
        Ring::PrimeField(3),
        Ring::Rationals,
        Ring::Integers,
    ]
}

fn budget(start: Instant, limit: Duration, what: &str) {
    let spent = start.elapsed();
    assert!(
        spent <= limit,
        "{what} took {spent:?}, budget is {limit:?}"
    );
}

/// Dimension of the space of all equivariant matrices Y x X, computed by
/// solving the raw commutation constraints; independent of the hom basis.
fn solver_hom_rank(x: &GSet, y: &GSet, ring: &Ring) -> usize {
    let group = x.group();
    let n = y.size() * x.size();
    let var = |j: usize, i: usize| j * x.size() + i;
    // over Z the solution module is free and its rank equals the rational
    // solution dimension, so a field computation answers both cases
    let field = if ring.is_field() { ring.clone() } else { Ring::Rationals };
    let mut rows: Vec<(usize, usize)> = Vec::new();
    for g in 1..group.order() {
        for j in 0..y.size() {
            for i in 0..x.size() {
                rows.push((var(y.act(g, j), x.act(g, i)), var(j, i)));
            }
        }
    }
    let mut mat = Mat::zeros(field.clone(), rows.len(), n);
    let one = field.one();
    for (r, (a, b)) in rows.into_iter().enumerate() {
        if a != b {
            mat.add_assign_at(r, a, &one);
            mat.add_assign_at(r, b, &field.neg(&one));
        }
    }
    kernel_basis_field(&mat).cols
}

#[test]
fn c1_hom_rank_law_equals_double_coset_count() {
    let start = Instant::now();
    for (name, group) in test_groups() {
        let lat = all_subgroups(&group, 512).unwrap();
        for k in &lat.subgroups {
            for h in &lat.subgroups {
                let expected = double_cosets(k, h).reps.len();
                let x = GSet::transitive(Arc::clone(&group), k);
                let y = GSet::transitive(Arc::clone(&group), h);
                for ring in test_rings() {
                    let basis = hom_basis(&x, &y, &ring);
                    assert_eq!(basis.len(), expected, "{name} basis size");
                    assert_eq!(
                        solver_hom_rank(&x, &y, &ring),
                        expected,
                        "{name} solver dimension over {}",
                        ring.name()
                    );
                    // independence: stack the flattened basis matrices
                    let flat: Vec<Vec<_>> = basis
                        .iter()
                        .map(|el| {
                            (0..y.size())
                                .flat_map(|r| (0..x.size()).map(move |c| (r, c)))
                                .map(|(r, c)| el.morphism.mat.get(r, c).clone())
                                .collect()
                        })
                        .collect();
                    let mut stacked = Mat::zeros(ring.clone(), y.size() * x.size(), flat.len());
                    for (j, col) in flat.iter().enumerate() {
                        for (i, v) in col.iter().enumerate() {
                            stacked.set(i, j, v.clone());
                        }
                    }
                    assert_eq!(rank(&stacked), expected, "{name} basis independence");
                }
            }
        }
    }
    budget(start, Duration::from_secs(10), "hom-rank law");
}

#[test]
fn c2_span_linearization_is_surjective_with_ideal_kernel() {
    let start = Instant::now();
    for group in [Group::cyclic(2), Group::cyclic(4), Group::symmetric(3)] {
        for ring in [Ring::Integers, Ring::PrimeField(2)] {
            let report = quotient_equivalence_check(&group, &ring).unwrap();
            assert!(report.holds, "{} over {}", group.order(), ring.name());
            for pair in &report.pairs {
                assert!(pair.surjective, "surjectivity at {:?}", (pair.k_class, pair.h_class));
                assert!(pair.kernel_matches, "kernel at {:?}", (pair.k_class, pair.h_class));
            }
        }
    }
    budget(start, Duration::from_secs(30), "span quotient");
}

#[test]
fn c3_mackey_formulas_hold_at_set_tensor_and_functor_level() {
    let start = Instant::now();

    // (a) set level: restriction of an induced H-set decomposes by double
    // cosets, exercised on one-point, free, and mixed H-sets
    for group in [Group::symmetric(3), Group::dihedral(4)] {
        let lat = all_subgroups(&group, 512).unwrap();
        for k in lat.rep_subgroups() {
            for h in lat.rep_subgroups() {
                let (hgroup, _) = h.as_group();
                let pt = GSet::one_point(Arc::clone(&hgroup));
                let free = GSet::transitive(
                    Arc::clone(&hgroup),
                    &Subgroup::trivial(Arc::clone(&hgroup)),
                );
                let mixed = pt.disjoint_union(&free);
                for x in [pt, free, mixed] {
                    assert!(mackey_formula_set_check(k, h, &x).unwrap());
                }
            }
        }
    }

    // (b) tensor level: R(G/K) (x) R(G/H) is isomorphic to the double
    // coset sum via an explicit permutation matrix, over every ring
    for (name, group) in test_groups() {
        let lat = all_subgroups(&group, 512).unwrap();
        for k in lat.rep_subgroups() {
            for h in lat.rep_subgroups() {
                let dec = tensor_decompose(k, h).unwrap();
                assert_eq!(dec.summands.len(), double_cosets(k, h).reps.len(), "{name}");
                assert_eq!(dec.source.size(), dec.target.size());
                for ring in test_rings() {
                    let iso = dec.iso_morphism(ring.clone());
                    assert_eq!(iso.mat.rows, iso.mat.cols);
                    for j in 0..iso.mat.cols {
                        let nonzero = (0..iso.mat.rows)
                            .filter(|&i| !ring.is_zero(iso.mat.get(i, j)))
                            .count();
                        assert_eq!(nonzero, 1, "{name}: iso must be a permutation matrix");
                    }
                }
            }
        }
    }

    // (c) functor level: the rank identity for restrictions of the
    // represented functor on S3, over every ring
    let s3 = Group::symmetric(3);
    let lat = all_subgroups(&s3, 512).unwrap();
    for ring in test_rings() {
        let point = GSet::one_point(Arc::clone(&s3));
        let y = yoneda(&point, &ring).unwrap();
        for k in lat.rep_subgroups() {
            let m = rho(&y, k).unwrap();
            for h in lat.rep_subgroups() {
                assert!(mackeykit_core::mackey::functor_mackey_formula_check(&m, h).unwrap());
            }
        }
    }

    budget(start, Duration::from_secs(30), "mackey formulas");
}

#[test]
fn c4_periodic_counterexample_reconstruction() {
    let start = Instant::now();
    for p in [3u64, 5] {
        let ring = Ring::PrimeField(p);
        let x = cp_example(p, &ring).unwrap();
        // a complex both ways around the period
        assert!(x.diffs[0].then(&x.diffs[1]).unwrap().is_zero());
        assert!(x.diffs[1].then(&x.diffs[0]).unwrap().is_zero());
        assert!(is_gamma_acyclic(&x).unwrap().acyclic, "p={p}");
        assert!(!is_contractible(&x).unwrap(), "p={p}");
        assert_eq!(kernel_basis_field(&x.diffs[0].mat).cols, 2, "p={p}");
    }
    budget(start, Duration::from_secs(5), "periodic counterexample");
}

#[test]
fn c5_homotopy_classes_match_fixed_homology_on_corpus() {
    let start = Instant::now();
    let mut total = 0usize;
    for group in [Group::cyclic(2), Group::cyclic(3), Group::symmetric(3)] {
        let lat = all_subgroups(&group, 512).unwrap();
        for ring in [Ring::PrimeField(2), Ring::PrimeField(3), Ring::Rationals] {
            for x in corpus(&group, &ring, 1729, 23).unwrap() {
                total += 1;
                let degrees = x.degrees();
                let (lo, hi) = (degrees[0], *degrees.last().unwrap());
                for h in lat.rep_subgroups() {
                    let fixed = fixed_point_complex(&x, h);
                    for n in (lo - 1)..=(hi + 1) {
                        let classes = homotopy_classes_from_generator(h, n, &x).unwrap();
                        assert_eq!(classes, fixed.homology(n));
                    }
                }
                assert_eq!(
                    is_gamma_acyclic(&x).unwrap().acyclic,
                    compact_generation_probe(&x).unwrap()
                );
            }
        }
    }
    assert!(total >= 200, "corpus too small: {total}");
    budget(start, Duration::from_secs(120), "corpus identification");
}

#[test]
fn c6_fixed_points_are_fully_faithful_and_projectives_lift() {
    let start = Instant::now();
    for group in [Group::cyclic(2), Group::cyclic(4), Group::symmetric(3)] {
        let lat = all_subgroups(&group, 512).unwrap();
        for ring in test_rings() {
            // catalogue: trivial, regular, and every transitive permutation module
            let mut catalogue = vec![
                GModule::trivial(ring.clone(), Arc::clone(&group)),
                GModule::regular(ring.clone(), Arc::clone(&group)),
            ];
            let mut sets = Vec::new();
            for h in lat.rep_subgroups() {
                let x = GSet::transitive(Arc::clone(&group), h);
                catalogue.push(GModule::of_gset(ring.clone(), &x));
                sets.push(x);
            }
            // full faithfulness: module hom rank survives the functor
            for m in &catalogue {
                for n in &catalogue {
                    let module_rank = gmodule_hom_rank(m, n).unwrap();
                    let functor_rank =
                        nat_transforms(&fp_functor(m).unwrap(), &fp_functor(n).unwrap())
                            .unwrap()
                            .len();
                    assert_eq!(module_rank, functor_rank, "over {}", ring.name());
                }
            }
            // on permutation modules the fixed-point functor is the
            // represented functor, matrix for matrix
            for x in &sets {
                let fp = fp_functor(&GModule::of_gset(ring.clone(), x)).unwrap();
                let yo = yoneda(x, &ring).unwrap();
                assert_eq!(fp.values, yo.values);
                assert_eq!(fp.action, yo.action);
            }
        }
        // projectivity: lifts exist against 20 seeded split epimorphisms
        let mut rng = ChaCha8Rng::seed_from_u64(1729);
        for trial in 0..20u64 {
            let ring = test_rings()[(trial % 4) as usize].clone();
            assert!(lifting_trial(&mut rng, &group, &ring).unwrap(), "trial {trial}");
        }
    }
    budget(start, Duration::from_secs(60), "fixed-point faithfulness");
}

#[test]
fn c7_inflation_is_a_double_coset_bijection() {
    let start = Instant::now();
    let d4 = Group::dihedral(4);
    let center: Vec<usize> = (0..d4.order())
        .filter(|&z| (0..d4.order()).all(|g| d4.mul(z, g) == d4.mul(g, z)))
        .collect();
    assert_eq!(center.len(), 2);
    let cases = vec![
        (Group::cyclic(4), vec![0, 2]),
        (Group::symmetric(3), vec![0, 2, 5]),
        (Arc::clone(&d4), center),
    ];
    for (group, normal) in cases {
        let n = subgroup_from_elements(&group, &normal).unwrap();
        assert!(n.is_normal_in(&Subgroup::full(Arc::clone(&group))));
        assert!(inflation_double_coset_check(&group, &n).unwrap());
    }
    budget(start, Duration::from_secs(5), "inflation bijection");
}

#[test]
fn c8_cohomologicality_accepts_linearizable_functors_and_rejects_spans() {
    let start = Instant::now();
    let s3 = Group::symmetric(3);
    let lat = all_subgroups(&s3, 512).unwrap();
    for ring in [Ring::PrimeField(2), Ring::Rationals] {
        // accept: fixed-point functors of the catalogue and every
        // represented functor
        let mut functors = vec![
            fp_functor(&GModule::trivial(ring.clone(), Arc::clone(&s3))).unwrap(),
            fp_functor(&GModule::regular(ring.clone(), Arc::clone(&s3))).unwrap(),
        ];
        for h in lat.rep_subgroups() {
            let x = GSet::transitive(Arc::clone(&s3), h);
            functors.push(yoneda(&x, &ring).unwrap());
        }
        for m in &functors {
            let omega = omega_from_mackey(m).unwrap();
            assert!(matches!(
                check_cohomological(&omega).unwrap(),
                Cohomologicality::Cohomological(_)
            ));
        }
        // reject: the span functor represented by the one-point set sees
        // the index relation, and the witness is a proper inclusion on
        // which the relation acts nontrivially
        let full = Subgroup::full(Arc::clone(&s3));
        let omega = omega_representable(&full, &ring).unwrap();
        match check_cohomological(&omega).unwrap() {
            Cohomologicality::Witness { k, h, value } => {
                assert!(k.order() < h.order());
                assert!(!value.is_zero());
            }
            Cohomologicality::Cohomological(_) => panic!("span functor must be rejected"),
        }
    }
    budget(start, Duration::from_secs(5), "cohomologicality");
}

#[test]
fn c9_suite_reports_are_byte_deterministic() {
    let configs = vec![
        ("C2", Group::cyclic(2), Ring::PrimeField(2)),
        ("S3", Group::symmetric(3), Ring::Rationals),
    ];
    let first = Instant::now();
    let baseline: Vec<String> = configs
        .iter()
        .map(|(label, g, r)| canonical_json(&run_suite(label, g, r, 1729).unwrap()).unwrap())
        .collect();
    let single = first.elapsed();
    let again = Instant::now();
    let repeat: Vec<String> = configs
        .iter()
        .map(|(label, g, r)| canonical_json(&run_suite(label, g, r, 1729).unwrap()).unwrap())
        .collect();
    assert_eq!(baseline, repeat, "reports must be byte-identical");
    assert!(
        again.elapsed() <= single * 2 + Duration::from_secs(1),
        "determinism check must cost no more than a rerun"
    );
    for report in &baseline {
        assert!(report.contains("\"pass\":true"));
    }
}
