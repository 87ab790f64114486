//! The `k[x]`-module view of the state space: annihilators of states, the
//! cyclic decomposition into invariant factors `f_1 | ... | f_r`, the
//! rational canonical form `P^(-1) A P = diag(companion(f_i))`, and the
//! divisibility check of the factors against `x^T - 1`.
//!
//! The reported invariant factors come from the Smith normal form of
//! `xI - A`. Cyclic generators are recovered independently: a vector with
//! maximal annihilator is found by a deterministic scan (standard basis,
//! then prefix sums, then seeded random draws), the quotient modulo its
//! cyclic subspace is decomposed recursively, and quotient generators are
//! lifted back with a Bezout-style correction so their annihilators are
//! preserved. The two routes must agree factor by factor, and the basis
//! identity is verified exactly before anything is returned.

use crate::error::{Error, Result};
use crate::factor;
use crate::field::FieldElement;
use crate::intnum;
use crate::matrix::Matrix;
use crate::poly::Polynomial;
use crate::prng::Prng;
use crate::smith;

/// Cyclic decomposition `V ~ (+) k[x]/(f_i)` with explicit generators and
/// the change of basis to rational canonical form.
#[derive(Debug, Clone)]
pub struct InvariantFactorDecomposition {
    /// Nontrivial invariant factors, ascending: `f_1 | f_2 | ... | f_r`.
    pub factors: Vec<Polynomial>,
    /// Cyclic generators `v_i` with annihilator exactly `f_i`.
    pub generators: Vec<Vec<FieldElement>>,
    /// Invertible `P` whose columns are the Krylov bases of the generators.
    pub basis_change: Matrix,
    /// `C = P^(-1) A P = diag(companion(f_1), ..., companion(f_r))`.
    pub canonical_form: Matrix,
}

impl InvariantFactorDecomposition {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "invariant_factors": self
                .factors
                .iter()
                .map(Polynomial::to_json)
                .collect::<Vec<_>>(),
            "generators": self
                .generators
                .iter()
                .map(|v| serde_json::Value::Array(v.iter().map(FieldElement::to_json).collect()))
                .collect::<Vec<_>>(),
            "P": self.basis_change.to_json(),
            "C": self.canonical_form.to_json(),
        })
    }
}

/// Monic annihilator of a state vector (1 for the zero vector).
pub fn annihilator(a: &Matrix, v: &[FieldElement]) -> Result<Polynomial> {
    a.krylov_annihilator(v)
}

/// Invariant factors with generators, basis change, and canonical form.
pub fn invariant_factors(a: &Matrix, seed: u64) -> Result<InvariantFactorDecomposition> {
    let snf = smith::smith_normal_form(a)?;
    let expected = snf.nontrivial_factors();
    let field = a.field().clone();
    let n = a.rows();

    let mut rng = Prng::new(seed);
    let decomposition = cyclic_decomposition(a, &mut rng)?;
    let factors: Vec<Polynomial> = decomposition.iter().map(|(_, f)| f.clone()).collect();
    assert_eq!(
        factors, expected,
        "cyclic decomposition disagrees with the Smith normal form"
    );
    for w in factors.windows(2) {
        assert!(w[0].divides(&w[1]), "divisibility chain broken");
    }

    let generators: Vec<Vec<FieldElement>> =
        decomposition.iter().map(|(v, _)| v.clone()).collect();
    let mut columns: Vec<Vec<FieldElement>> = Vec::with_capacity(n);
    for (v, f) in &decomposition {
        let mut w = v.clone();
        for _ in 0..f.degree().unwrap() {
            columns.push(w.clone());
            w = a.matvec(&w);
        }
    }
    assert_eq!(columns.len(), n, "invariant factor degrees must sum to n");
    let p = Matrix::from_columns(&field, &columns);
    let c = Matrix::block_diag(
        &field,
        &decomposition
            .iter()
            .map(|(_, f)| Matrix::companion(f))
            .collect::<Vec<_>>(),
    );
    let p_inv = p.inverse().map_err(|_| {
        Error::DimensionMismatch("Krylov columns of the generators are dependent".into())
    })?;
    assert_eq!(&(&p_inv * &(a * &p)), &c, "P^(-1) A P != C");
    Ok(InvariantFactorDecomposition {
        factors,
        generators,
        basis_change: p,
        canonical_form: c,
    })
}

/// Recursive cyclic decomposition: returns `(generator, annihilator)`
/// pairs ascending by the divisibility chain.
fn cyclic_decomposition(
    a: &Matrix,
    rng: &mut Prng,
) -> Result<Vec<(Vec<FieldElement>, Polynomial)>> {
    let field = a.field().clone();
    let n = a.rows();
    let m = a.minimal_polynomial()?;
    let d = m.degree().unwrap();
    let v = max_annihilator_vector(a, &m, rng)?;
    if d == n {
        return Ok(vec![(v, m)]);
    }

    // Krylov basis of the cyclic subspace Z(v)
    let mut krylov: Vec<Vec<FieldElement>> = Vec::with_capacity(d);
    let mut w = v.clone();
    for _ in 0..d {
        krylov.push(w.clone());
        w = a.matvec(&w);
    }
    let krylov_mat = Matrix::from_columns(&field, &krylov);
    // row-reduce the span to get canonical projection coordinates
    let span_rows = Matrix::from_fn(&field, d, n, |i, j| krylov[i][j].clone());
    let (rref, pivots) = span_rows.rref();
    assert_eq!(pivots.len(), d, "Krylov vectors of a cyclic vector are independent");
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let reduce = |x: &[FieldElement]| -> Vec<FieldElement> {
        let mut out = x.to_vec();
        for (row, &pc) in pivots.iter().enumerate() {
            let coeff = out[pc].clone();
            if coeff.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let t = &coeff * rref.get(row, j);
                *slot = &*slot - &t;
            }
        }
        out
    };

    // induced action on the quotient, in free-coordinate space
    let abar = Matrix::from_fn(&field, free.len(), free.len(), |i, j| {
        let mut e = vec![field.zero(); n];
        e[free[j]] = field.one();
        let img = reduce(&a.matvec(&e));
        img[free[i]].clone()
    });

    let mut out = Vec::new();
    for (wbar, g) in cyclic_decomposition(&abar, rng)? {
        // embed the quotient generator and fix it up so g(A) kills it:
        // g(A)w lands in Z(v), say g(A)w = h(A)v; then g | h and
        // w' = w - (h/g)(A)v has annihilator exactly g
        let mut w = vec![field.zero(); n];
        for (idx, &f_col) in free.iter().enumerate() {
            w[f_col] = wbar[idx].clone();
        }
        let gw = a.poly_apply(&g, &w);
        let h_coeffs = krylov_mat
            .solve(&gw)
            .expect("g(A)w lies in the cyclic subspace");
        let h = Polynomial::from_coeffs(&field, h_coeffs);
        let correction = h.div_exact(&g)?;
        let lifted: Vec<FieldElement> = w
            .iter()
            .zip(&a.poly_apply(&correction, &v))
            .map(|(wi, ci)| wi - ci)
            .collect();
        debug_assert_eq!(a.krylov_annihilator(&lifted)?, g);
        out.push((lifted, g));
    }
    out.push((v, m));
    Ok(out)
}

/// Vector whose annihilator is the full minimal polynomial: deterministic
/// scan of the standard basis, then prefix sums, then seeded random draws.
fn max_annihilator_vector(
    a: &Matrix,
    m: &Polynomial,
    rng: &mut Prng,
) -> Result<Vec<FieldElement>> {
    let field = a.field().clone();
    let n = a.rows();
    let target = m.degree();
    let check = |cand: Vec<FieldElement>| -> Result<Option<Vec<FieldElement>>> {
        let ann = a.krylov_annihilator(&cand)?;
        Ok((ann.degree() == target && &ann == m).then_some(cand))
    };
    for i in 0..n {
        let mut e = vec![field.zero(); n];
        e[i] = field.one();
        if let Some(v) = check(e)? {
            return Ok(v);
        }
    }
    let mut prefix = vec![field.zero(); n];
    prefix[0] = field.one();
    for i in 1..n {
        prefix[i] = field.one();
        if let Some(v) = check(prefix.clone())? {
            return Ok(v);
        }
    }
    for _ in 0..10_000 {
        let cand: Vec<FieldElement> = (0..n)
            .map(|_| random_element(&field, rng))
            .collect();
        if let Some(v) = check(cand)? {
            return Ok(v);
        }
    }
    unreachable!("cyclic vectors for the top invariant factor have positive density")
}

fn random_element(field: &crate::field::Field, rng: &mut Prng) -> FieldElement {
    match field.order() {
        Some(q) => field.element_from_index(rng.below(q)).unwrap(),
        None => field.int(rng.range_i64(-9, 9)),
    }
}

/// Per-factor divisibility report against `x^T - 1`.
#[derive(Debug, Clone)]
pub struct DivisibilityEntry {
    pub factor: Polynomial,
    /// Multiplicative order of `x` modulo the factor.
    pub order: u64,
    pub divides: bool,
}

#[derive(Debug, Clone)]
pub struct DivisibilityReport {
    pub period: u64,
    pub entries: Vec<DivisibilityEntry>,
    pub lcm_of_orders: u64,
    pub all_divide: bool,
}

impl DivisibilityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "T": self.period,
            "factors": self
                .entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "factor": e.factor.to_json(),
                        "order": e.order,
                        "divides": e.divides,
                    })
                })
                .collect::<Vec<_>>(),
            "lcm_of_orders": self.lcm_of_orders,
            "all_divide": self.all_divide,
        })
    }
}

/// Checks `f_i | x^T - 1` for every invariant factor and that the lcm of
/// the factor orders reproduces `T`. Finite fields only.
pub fn verify_period_divisibility(
    dec: &InvariantFactorDecomposition,
    t: u64,
) -> Result<DivisibilityReport> {
    let mut entries = Vec::with_capacity(dec.factors.len());
    let mut lcm = 1u64;
    let mut all = true;
    for f in &dec.factors {
        let field = f.field();
        if field.is_rational() {
            return Err(Error::RationalFieldUnsupported);
        }
        let order = factor::order_of_x_mod(f)?;
        // f | x^T - 1 iff x^T = 1 mod f
        let divides = Polynomial::x(field).powmod(t, f)?.is_one();
        if t <= 4096 {
            // literal division cross-check at small T
            let mut coeffs = vec![field.int(-1)];
            coeffs.extend(std::iter::repeat_with(|| field.zero()).take(t as usize - 1));
            coeffs.push(field.one());
            let xt1 = Polynomial::from_coeffs(field, coeffs);
            assert_eq!(f.divides(&xt1), divides, "powmod and division disagree");
        }
        all &= divides;
        lcm = intnum::lcm_checked(lcm, order)?;
        entries.push(DivisibilityEntry {
            factor: f.clone(),
            order,
            divides,
        });
    }
    Ok(DivisibilityReport {
        period: t,
        entries,
        lcm_of_orders: lcm,
        all_divide: all && lcm == t,
    })
}
