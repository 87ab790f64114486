//! Acceptance suite: every release-gating property, one test per
//! criterion, each printing one PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! All checks are exact (zero tolerance); runtime budgets are asserted.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;

use sysrep_core::canonical;
use sysrep_core::decomp::{self, BlockForm, Eigenspaces};
use sysrep_core::dynamics;
use sysrep_core::factor;
use sysrep_core::field::{Field, FieldElement};
use sysrep_core::matrix::Matrix;
use sysrep_core::poly::Polynomial;
use sysrep_core::prng::Prng;
use sysrep_core::rep::{from_module_action, Representation, TimeGroup};
use sysrep_core::smith;

fn run_criterion(name: &str, limit: Duration, body: impl FnOnce() -> String) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match outcome {
        Ok(detail) => {
            println!("ACCEPTANCE {name}: PASS ({detail}; {elapsed:.2?})");
            assert!(
                elapsed <= limit,
                "criterion {name} exceeded its runtime budget: {elapsed:?} > {limit:?}"
            );
        }
        Err(cause) => {
            println!("ACCEPTANCE {name}: FAIL ({elapsed:.2?})");
            resume_unwind(cause);
        }
    }
}

fn random_matrix(field: &Field, n: usize, rng: &mut Prng) -> Matrix {
    Matrix::from_fn(field, n, n, |_, _| match field.order() {
        Some(q) => field.element_from_index(rng.below(q)).unwrap(),
        None => field.int(rng.range_i64(-3, 3)),
    })
}

fn random_invertible(field: &Field, n: usize, rng: &mut Prng) -> Matrix {
    loop {
        let a = random_matrix(field, n, rng);
        if a.inverse().is_ok() {
            return a;
        }
    }
}

fn fib_f2() -> Matrix {
    Matrix::from_int_rows(&Field::prime(2).unwrap(), &[&[1, 1], &[1, 0]])
}

fn rotation_f3() -> Matrix {
    let k = Field::prime(3).unwrap();
    Matrix::companion(&Polynomial::from_ints(&k, &[1, 0, 1]))
}

#[test]
fn criterion_1_homomorphism_law() {
    run_criterion("1 (homomorphism law)", Duration::from_secs(10), || {
        let primes = [2u64, 3, 5, 13];
        let mut rng = Prng::new(0xACC1);
        let mut pairs: u64 = 0;
        for i in 0..100 {
            let p = primes[i % primes.len()];
            let field = Field::prime(p).unwrap();
            let n = 1 + (i % 6);
            let a = random_invertible(&field, n, &mut rng);
            let rep = Representation::new(TimeGroup::Integers, a).unwrap();
            let report = rep.check_homomorphism(256, rng.next_u64());
            assert!(
                report.pass,
                "law violated at {:?} for system {i} over F_{p}",
                report.counterexample
            );
            pairs += 256;
        }
        format!("100 invertible systems over F_2/F_3/F_5/F_13, {pairs} sampled pairs, exact")
    });
}

/// Shared corpus for the decomposition criteria: 200 finite-field
/// matrices and 50 rational matrices with small entries, n <= 6.
fn decomposition_corpus() -> Vec<Matrix> {
    let primes = [2u64, 3, 5, 13];
    let mut rng = Prng::new(0xACC2);
    let mut corpus = Vec::with_capacity(250);
    for i in 0..200 {
        let field = Field::prime(primes[i % primes.len()]).unwrap();
        let n = 1 + (i % 6);
        corpus.push(random_matrix(&field, n, &mut rng));
    }
    let q = Field::rational();
    for i in 0..50 {
        let n = 1 + (i % 6);
        corpus.push(random_matrix(&q, n, &mut rng));
    }
    corpus
}

#[test]
fn criterion_2_primary_decomposition() {
    run_criterion("2 (primary decomposition)", Duration::from_secs(30), || {
        let corpus = decomposition_corpus();
        let mut rng = Prng::new(0xACC2 + 1);
        for a in &corpus {
            let field = a.field();
            let n = a.rows();
            let comps = decomp::primary_decomposition(a, rng.next_u64()).unwrap();
            // dimensions sum to n
            let total: usize = comps.iter().map(|c| c.basis.len()).sum();
            assert_eq!(total, n);
            // projector algebra, exact
            let mut sum = Matrix::zero(field, n, n);
            for c in &comps {
                assert_eq!(&(&c.projector * &c.projector), &c.projector);
                assert_eq!(&(a * &c.projector), &(&c.projector * a));
                sum = &sum + &c.projector;
            }
            assert!(sum.is_identity());
            for (i, ci) in comps.iter().enumerate() {
                for (j, cj) in comps.iter().enumerate() {
                    if i != j {
                        assert!((&ci.projector * &cj.projector).is_zero());
                    }
                }
            }
            // invariance: A maps each component into itself
            for c in &comps {
                if c.basis.is_empty() {
                    continue;
                }
                let basis_mat = Matrix::from_columns(field, &c.basis);
                for v in &c.basis {
                    assert!(basis_mat.solve(&a.matvec(v)).is_some());
                }
            }
        }
        format!("{} systems (200 over F_p, 50 over Q), zero tolerance", corpus.len())
    });
}

#[test]
fn criterion_3_invariant_factors() {
    run_criterion("3 (invariant factors)", Duration::from_secs(30), || {
        let corpus = decomposition_corpus();
        let mut rng = Prng::new(0xACC3);
        for a in &corpus {
            let dec = canonical::invariant_factors(a, rng.next_u64()).unwrap();
            for w in dec.factors.windows(2) {
                assert!(w[0].divides(&w[1]), "chain broken");
            }
            let char_poly = smith::characteristic_polynomial(a).unwrap();
            let product = dec
                .factors
                .iter()
                .fold(Polynomial::one(a.field()), |acc, f| &acc * f);
            assert_eq!(product, char_poly);
            assert_eq!(dec.factors.last().unwrap(), &a.minimal_polynomial().unwrap());
            // change of basis reproduces the canonical form entrywise
            let p_inv = dec.basis_change.inverse().unwrap();
            assert_eq!(&(&p_inv * &(a * &dec.basis_change)), &dec.canonical_form);
        }
        format!("{} systems, chain/product/top factor/basis identity exact", corpus.len())
    });
}

/// Invertible corpus over F_2, F_3, F_5 with n <= 5 (state counts at most
/// 5^5 = 3125).
fn period_corpus() -> Vec<Matrix> {
    let primes = [2u64, 3, 5];
    let mut rng = Prng::new(0xACC4);
    (0..100)
        .map(|i| {
            let field = Field::prime(primes[i % primes.len()]).unwrap();
            let n = 1 + (i % 5);
            random_invertible(&field, n, &mut rng)
        })
        .collect()
}

#[test]
fn criterion_4_period_and_divisibility() {
    run_criterion("4 (period and divisibility)", Duration::from_secs(10), || {
        for a in &period_corpus() {
            let t = dynamics::order_of_matrix(a).unwrap();
            assert!(a.pow_checked(t).unwrap().is_identity(), "A^T != I");
            for &l in sysrep_core::intnum::factor_u64(t).keys() {
                assert!(
                    !a.pow_checked(t / l).unwrap().is_identity(),
                    "T not minimal at prime {l}"
                );
            }
            let dec = canonical::invariant_factors(a, 0).unwrap();
            let report = canonical::verify_period_divisibility(&dec, t).unwrap();
            assert!(report.all_divide, "some factor fails to divide x^T - 1");
            assert_eq!(report.lcm_of_orders, t);
        }
        // named instances
        assert_eq!(dynamics::order_of_matrix(&fib_f2()).unwrap(), 3);
        assert_eq!(dynamics::order_of_matrix(&rotation_f3()).unwrap(), 4);
        "100 invertible systems over F_2/F_3/F_5 plus the Fibonacci (T=3) and planar-rotation (T=4) instances".into()
    });
}

#[test]
fn criterion_5_orbit_census_equivalence() {
    run_criterion("5 (orbit census equivalence)", Duration::from_secs(60), || {
        let limit = BigUint::from(3u32).pow(10);
        let mut checked = 0usize;
        for a in &period_corpus() {
            let analytic = dynamics::orbit_census_analytic(a).unwrap();
            if analytic.states > limit {
                continue;
            }
            let enumerated =
                dynamics::orbit_census_enumerate(a, 1_000_000, 1).unwrap();
            assert_eq!(analytic, enumerated, "census routes disagree");
            let covered: BigUint = analytic
                .cycle_counts
                .iter()
                .map(|(t, c)| c * BigUint::from(*t))
                .sum();
            assert_eq!(covered, analytic.states, "orbits must partition the states");
            checked += 1;
        }
        // named instance: the planar rotation over F_3 has one fixed point
        // and two 4-cycles
        let census = dynamics::orbit_census_analytic(&rotation_f3()).unwrap();
        let mut expect = std::collections::BTreeMap::new();
        expect.insert(1u64, BigUint::from(1u32));
        expect.insert(4u64, BigUint::from(2u32));
        assert_eq!(census.cycle_counts, expect);
        assert_eq!(
            census,
            dynamics::orbit_census_enumerate(&rotation_f3(), 1_000_000, 1).unwrap()
        );
        format!("{checked} systems within 3^10 states, analytic == enumerated exactly")
    });
}

#[test]
fn criterion_6_algebra_homomorphism_and_module_action() {
    run_criterion(
        "6 (algebra homomorphism and module action)",
        Duration::from_secs(10),
        || {
            let primes = [2u64, 3, 5];
            let mut rng = Prng::new(0xACC6);
            for i in 0..60 {
                let field = Field::prime(primes[i % primes.len()]).unwrap();
                let q = field.order().unwrap();
                let n = 1 + (i % 4);
                let a = random_invertible(&field, n, &mut rng);
                let rep = Representation::new(TimeGroup::Integers, a.clone()).unwrap();
                let rand_poly = |rng: &mut Prng| {
                    let d = rng.below(7) as usize;
                    Polynomial::from_coeffs(
                        &field,
                        (0..=d)
                            .map(|_| field.element_from_index(rng.below(q)).unwrap())
                            .collect(),
                    )
                };
                for _ in 0..10 {
                    let f = rand_poly(&mut rng);
                    let g = rand_poly(&mut rng);
                    let v: Vec<FieldElement> = (0..n)
                        .map(|_| field.element_from_index(rng.below(q)).unwrap())
                        .collect();
                    // Phi(f + g) = Phi(f) + Phi(g) as actions on vectors
                    let sum = rep.poly_action(&(&f + &g), &v).unwrap();
                    let split: Vec<FieldElement> = rep
                        .poly_action(&f, &v)
                        .unwrap()
                        .iter()
                        .zip(&rep.poly_action(&g, &v).unwrap())
                        .map(|(x, y)| x + y)
                        .collect();
                    assert_eq!(sum, split);
                    // Phi(fg) = Phi(f) Phi(g)
                    let prod = rep.poly_action(&(&f * &g), &v).unwrap();
                    let nested = rep
                        .poly_action(&f, &rep.poly_action(&g, &v).unwrap())
                        .unwrap();
                    assert_eq!(prod, nested);
                }
                // module action over the induced cyclic group
                let quotient = rep.induce_quotient().unwrap();
                let TimeGroup::CyclicMod(t) = quotient.group() else {
                    panic!("quotient must be cyclic");
                };
                for _ in 0..10 {
                    let f = rand_poly(&mut rng);
                    let v: Vec<FieldElement> = (0..n)
                        .map(|_| field.element_from_index(rng.below(q)).unwrap())
                        .collect();
                    // reduction mod x^T - 1 does not change the action
                    assert_eq!(
                        quotient.module_action(&f, &v).unwrap(),
                        quotient.poly_action(&f, &v).unwrap()
                    );
                }
                // round-trip: the module with x acting as A recovers A
                let rebuilt = from_module_action(t, a.clone()).unwrap();
                assert_eq!(rebuilt.generator(), &a);
                let v: Vec<FieldElement> = (0..n)
                    .map(|_| field.element_from_index(rng.below(q)).unwrap())
                    .collect();
                assert_eq!(
                    rebuilt.module_action(&Polynomial::x(&field), &v).unwrap(),
                    a.matvec(&v)
                );
            }
            "60 systems, 20 polynomial pairs each, exact".into()
        },
    );
}

#[test]
fn criterion_7_planar_blocks() {
    run_criterion("7 (planar blocks)", Duration::from_secs(10), || {
        // [[0,1],[-1,0]] over Q: rotation with a = 0, b = 1
        let q = Field::rational();
        let rot_q = Matrix::from_int_rows(&q, &[&[0, 1], &[-1, 0]]);
        let blocks = decomp::planar_blocks(&rot_q, 0).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].form, BlockForm::Rotation);
        assert!(blocks[0].a.is_zero());
        assert_eq!(blocks[0].b, Some(q.one()));
        check_restriction_exact(&rot_q, &blocks[0]);

        // companion(x^2+1) over F_3: the rotation coefficient satisfies
        // b^2 = c0 - a^2 = 1, so the rotation form exists with b = 1
        // (oracle: [[0,1],[-1,0]] over F_3 shares the irreducible
        // characteristic polynomial x^2 + 1, hence is similar to the
        // companion form)
        let k3 = Field::prime(3).unwrap();
        let c3 = rotation_f3();
        let blocks = decomp::planar_blocks(&c3, 0).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].form, BlockForm::Rotation);
        assert!(blocks[0].a.is_zero());
        assert_eq!(blocks[0].b, Some(k3.one()));
        check_restriction_exact(&c3, &blocks[0]);

        // companion(x^2+1) over F_5: x^2 + 1 = (x-2)(x+2) splits, so the
        // plane decomposes into eigenlines; the square root of -1 is the
        // eigenvalue 2 (2^2 = 4 = -1 mod 5)
        let k5 = Field::prime(5).unwrap();
        let c5 = Matrix::companion(&Polynomial::from_ints(&k5, &[1, 0, 1]));
        assert!(decomp::planar_blocks(&c5, 0).unwrap().is_empty());
        let minus_one = -&k5.one();
        let i5 = minus_one.sqrt().expect("-1 is a square mod 5");
        assert_eq!(&i5 * &i5, minus_one);
        assert_eq!(i5, k5.int(2));
        match decomp::generalized_eigenspaces(&c5, 0).unwrap() {
            Eigenspaces::Split(spaces) => {
                let labels: Vec<FieldElement> =
                    spaces.iter().map(|(l, _)| l.clone()).collect();
                assert!(labels.contains(&k5.int(2)) && labels.contains(&k5.int(3)));
            }
            other => panic!("expected eigenlines over F_5, got {other:?}"),
        }

        // genuine companion fallback over F_5: x^2 + x + 1 is irreducible
        // and c0 - a^2 = 2 is a non-residue (exhaustive check)
        let p = Polynomial::from_ints(&k5, &[1, 1, 1]);
        assert!(factor::is_irreducible(&p).unwrap());
        let squares: Vec<u64> = (0..5u64).map(|r| (r * r) % 5).collect();
        assert!(!squares.contains(&2));
        let cf = Matrix::companion(&p);
        let blocks = decomp::planar_blocks(&cf, 0).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].form, BlockForm::Companion);
        assert_eq!(blocks[0].basis_w, cf.matvec(&blocks[0].basis_u));

        // restriction exactness on a random corpus of odd-characteristic
        // and rational systems
        let mut rng = Prng::new(0xACC7);
        let mut rotations = 0;
        for i in 0..40 {
            let field = if i % 3 == 2 {
                Field::rational()
            } else {
                Field::prime([3, 5, 7, 13][i % 4]).unwrap()
            };
            let n = 2 + (i % 4);
            let a = random_matrix(&field, n, &mut rng);
            for b in decomp::planar_blocks(&a, rng.next_u64()).unwrap() {
                if b.form == BlockForm::Rotation {
                    check_restriction_exact(&a, &b);
                    rotations += 1;
                }
            }
        }
        format!("named instances plus {rotations} random rotation blocks, restriction exact")
    });
}

fn check_restriction_exact(a: &Matrix, block: &decomp::PlanarBlock) {
    let field = a.field();
    let basis = Matrix::from_columns(field, &[block.basis_u.clone(), block.basis_w.clone()]);
    let cu = basis.solve(&a.matvec(&block.basis_u)).expect("Au in block");
    let cw = basis.solve(&a.matvec(&block.basis_w)).expect("Aw in block");
    let b = block.b.clone().expect("rotation block has b");
    assert_eq!(cu, vec![block.a.clone(), -&b], "first column must be (a, -b)");
    assert_eq!(cw, vec![b, block.a.clone()], "second column must be (b, a)");
}

#[test]
fn criterion_8_factorization_roundtrip() {
    run_criterion("8 (factorization round-trip)", Duration::from_secs(30), || {
        let mut rng = Prng::new(0xACC8);
        let primes = [2u64, 3, 5];
        for i in 0..1000 {
            let field = Field::prime(primes[i % primes.len()]).unwrap();
            let q = field.order().unwrap();
            let deg = 1 + rng.below(10) as usize;
            let mut coeffs: Vec<FieldElement> = (0..=deg)
                .map(|_| field.element_from_index(rng.below(q)).unwrap())
                .collect();
            if coeffs[deg].is_zero() {
                coeffs[deg] = field.one();
            }
            let f = Polynomial::from_coeffs(&field, coeffs);
            let fac = factor::factor(&f, rng.next_u64()).unwrap();
            assert_eq!(fac.product(), f, "re-multiplication must be exact");
            for (g, _) in &fac.factors {
                assert!(
                    factor::is_irreducible(g).unwrap(),
                    "reported factor {g:?} is reducible"
                );
            }
        }
        let q = Field::rational();
        for _ in 0..100 {
            let deg = 1 + rng.below(8) as usize;
            let mut coeffs: Vec<i64> = (0..=deg).map(|_| rng.range_i64(-5, 5)).collect();
            if coeffs[deg] == 0 {
                coeffs[deg] = 1;
            }
            let f = Polynomial::from_ints(&q, &coeffs);
            let fac = factor::factor(&f, rng.next_u64()).unwrap();
            assert_eq!(fac.product(), f);
            for (g, _) in &fac.factors {
                assert!(factor::is_irreducible(g).unwrap());
            }
        }
        "1000 finite-field polynomials (deg <= 10) and 100 rational polynomials (deg <= 8)".into()
    });
}

#[test]
fn criterion_9_cli_determinism() {
    run_criterion("9 (CLI determinism)", Duration::from_secs(60), || {
        let exe = env!("CARGO_BIN_EXE_sysrep");
        let fixtures_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests")
            .join("fixtures");
        let golden_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests")
            .join("golden");
        let fixtures = [
            "fib_f2",
            "rotation_f3",
            "diag_f5",
            "rational_rotation",
            "ext_f4",
        ];
        let finite = ["fib_f2", "rotation_f3", "diag_f5", "ext_f4"];
        let regen = std::env::var_os("REGEN_GOLDEN").is_some();
        let mut compared = 0usize;

        let run = |args: &[&str]| -> (Vec<u8>, i32) {
            let out = std::process::Command::new(exe)
                .args(args)
                .output()
                .expect("spawn sysrep");
            (out.stdout, out.status.code().unwrap_or(-1))
        };

        for name in fixtures {
            let path = fixtures_dir.join(format!("{name}.json"));
            let path_s = path.to_str().unwrap();
            let mut cases: Vec<(String, Vec<String>)> = vec![
                (
                    format!("{name}.analyze.json"),
                    vec!["analyze".into(), path_s.into(), "--json".into()],
                ),
                (
                    format!("{name}.decompose.json"),
                    vec!["decompose".into(), path_s.into(), "--json".into()],
                ),
            ];
            if finite.contains(&name) {
                cases.push((
                    format!("{name}.orbits.json"),
                    vec!["orbits".into(), path_s.into(), "--json".into()],
                ));
            }
            for (golden_name, args) in cases {
                let argv: Vec<&str> = args.iter().map(String::as_str).collect();
                let (out1, code1) = run(&argv);
                assert_eq!(code1, 0, "{golden_name}: nonzero exit");
                let (out2, code2) = run(&argv);
                assert_eq!(code2, 0);
                assert_eq!(out1, out2, "{golden_name}: two runs differ");
                let golden_path = golden_dir.join(&golden_name);
                if regen {
                    std::fs::write(&golden_path, &out1).unwrap();
                } else {
                    let expect = std::fs::read(&golden_path)
                        .unwrap_or_else(|e| panic!("missing golden {golden_name}: {e}"));
                    assert_eq!(out1, expect, "{golden_name}: output differs from golden");
                }
                compared += 1;
            }
            // enumeration is worker-count invariant
            if finite.contains(&name) {
                let base = run(&["orbits", path_s, "--json", "--workers", "1"]);
                for workers in ["2", "3"] {
                    let other = run(&["orbits", path_s, "--json", "--workers", workers]);
                    assert_eq!(base, other, "{name}: workers={workers} differs");
                }
            }
        }
        // the rational fixture has no finite orbit census
        let rational = fixtures_dir.join("rational_rotation.json");
        let out = std::process::Command::new(exe)
            .args(["orbits", rational.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(4), "orbits over Q must exit 4");
        format!("{compared} golden files byte-identical across runs and worker counts")
    });
}
