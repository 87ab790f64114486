//! Finite-field dynamics: the minimal period `T` with `A^T = I`, per-state
//! periods, and the complete orbit census of the state space, computed two
//! independent ways.
//!
//! The analytic census counts points of period dividing `d` as
//! `F_d = q^(n - rank(A^d - I))` for each divisor `d` of `T` and recovers
//! exact-period counts by Möbius inversion; the enumeration census walks
//! every state. The two must agree exactly, and enumeration serves as the
//! ground-truth oracle in tests.
//!
//! Although `Z/TZ` is isomorphic to a product of prime-power cyclic groups,
//! that factorization concerns the time group only: the dynamics are
//! generated by a single operator and evolve along one cyclic direction, so
//! no per-prime-power census split exists here.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::intnum;
use crate::matrix::Matrix;
use crate::rep::Representation;
use crate::{factor, smith};

/// Default guard on the enumeration state count.
pub const DEFAULT_MAX_STATES: u64 = 1_000_000;

/// Hard cap for the census guard override.
pub const HARD_MAX_STATES: u64 = 10_000_000;

/// Complete orbit structure of a finite state space under an invertible
/// evolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCensus {
    /// `q^n`.
    pub states: BigUint,
    /// Minimal `T` with `A^T = I`.
    pub period: u64,
    /// Cycle length -> number of distinct orbits of exactly that length.
    /// Zero counts are omitted; every key divides `period`.
    pub cycle_counts: BTreeMap<u64, BigUint>,
    /// Divisor `d` of `T` -> number of states with period dividing `d`,
    /// i.e. `|ker(A^d - I)|`.
    pub fixed_point_counts: BTreeMap<u64, BigUint>,
}

impl OrbitCensus {
    pub fn to_json(&self) -> serde_json::Value {
        let cycles: serde_json::Map<String, serde_json::Value> = self
            .cycle_counts
            .iter()
            .map(|(t, c)| (t.to_string(), serde_json::json!(c.to_string())))
            .collect();
        let fixed: serde_json::Map<String, serde_json::Value> = self
            .fixed_point_counts
            .iter()
            .map(|(t, c)| (t.to_string(), serde_json::json!(c.to_string())))
            .collect();
        serde_json::json!({
            "states": self.states.to_string(),
            "T": self.period,
            "cycles": cycles,
            "fixed_points": fixed,
        })
    }

    /// Partition identity: the orbits cover the state space exactly.
    pub fn total_states_covered(&self) -> BigUint {
        self.cycle_counts
            .iter()
            .map(|(t, c)| c * BigUint::from(*t))
            .sum()
    }
}

/// Minimal `T >= 1` with `A^T = I` over a finite field, as the lcm of the
/// orders of `x` modulo the invariant factors of `xI - A`. Verified by an
/// exact power check and minimality checks at every prime divisor of `T`.
pub fn order_of_matrix(a: &Matrix) -> Result<u64> {
    if !a.field().is_finite() {
        return Err(Error::RationalFieldUnsupported);
    }
    a.inverse().map_err(|_| Error::SingularMatrix)?;
    let snf = smith::smith_normal_form(a)?;
    let mut t = 1u64;
    for f in snf.nontrivial_factors() {
        t = intnum::lcm_checked(t, factor::order_of_x_mod(&f)?)?;
    }
    assert!(
        a.pow_checked(t)?.is_identity(),
        "order computation failed the exact power check"
    );
    for &l in intnum::factor_u64(t).keys() {
        assert!(
            !a.pow_checked(t / l)?.is_identity(),
            "order is not minimal at prime {l}"
        );
    }
    Ok(t)
}

/// Minimal `t >= 1` with `A^t x0 = x0`: the order of `x` modulo the
/// annihilator of `x0`. The origin has period 1.
pub fn point_period(rep: &Representation, x0: &[FieldElement]) -> Result<u64> {
    if !rep.field().is_finite() {
        return Err(Error::RationalFieldUnsupported);
    }
    rep.generator().inverse().map_err(|_| Error::SingularMatrix)?;
    let ann = rep.annihilator(x0)?;
    factor::order_of_x_mod(&ann)
}

/// Analytic orbit census via rank counts and Möbius inversion over the
/// divisor lattice of `T`.
pub fn orbit_census_analytic(a: &Matrix) -> Result<OrbitCensus> {
    let t = order_of_matrix(a)?;
    let field = a.field();
    let q = field.order().unwrap();
    let n = a.rows();
    let identity = Matrix::identity(field, n);
    let divisors = intnum::divisors_sorted(t);
    let mut fixed: BTreeMap<u64, BigUint> = BTreeMap::new();
    for &d in &divisors {
        let rank = (&a.pow_checked(d)? - &identity).rank();
        fixed.insert(d, BigUint::from(q).pow((n - rank) as u32));
    }
    let mut cycles: BTreeMap<u64, BigUint> = BTreeMap::new();
    for &t_len in &divisors {
        let mut exact = BigInt::zero();
        for &d in &divisors {
            if t_len % d == 0 {
                let mu = intnum::moebius(t_len / d);
                let term = BigInt::from(fixed[&d].clone());
                match mu {
                    1 => exact += term,
                    -1 => exact -= term,
                    _ => {}
                }
            }
        }
        assert!(!exact.is_negative(), "Möbius inversion went negative");
        let exact = exact.magnitude().clone();
        let (orbits, rem) = num_integer::div_rem(exact, BigUint::from(t_len));
        assert!(rem.is_zero(), "exact-period count must be divisible by the period");
        if !orbits.is_zero() {
            cycles.insert(t_len, orbits);
        }
    }
    Ok(OrbitCensus {
        states: BigUint::from(q).pow(n as u32),
        period: t,
        cycle_counts: cycles,
        fixed_point_counts: fixed,
    })
}

/// Exhaustive orbit census: walks every state in canonical odometer order.
/// `workers` may partition the scan; the result is identical for every
/// worker count. Guarded by `max_states`.
pub fn orbit_census_enumerate(a: &Matrix, max_states: u64, workers: usize) -> Result<OrbitCensus> {
    let t = order_of_matrix(a)?;
    let field = a.field().clone();
    let q = field.order().unwrap();
    let n = a.rows();
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(q);
        if total > max_states {
            return Err(Error::StateSpaceTooLarge(format!(
                "q^n = {q}^{n} exceeds the census guard of {max_states} states"
            )));
        }
    }
    let workers = workers.max(1).min(total as usize).max(1);
    let decode = |idx: u64| -> Vec<FieldElement> {
        let mut rest = idx;
        (0..n)
            .map(|_| {
                let e = field.element_from_index(rest % q).unwrap();
                rest /= q;
                e
            })
            .collect()
    };
    let encode = |v: &[FieldElement]| -> u64 {
        let mut idx = 0u64;
        for e in v.iter().rev() {
            idx = idx * q + field.index_of_element(e).unwrap();
        }
        idx
    };
    let step = |idx: u64| -> u64 { encode(&a.matvec(&decode(idx))) };

    let chunk = total.div_ceil(workers as u64);
    let counts: Vec<BTreeMap<u64, u64>> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers as u64 {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(total);
            let step = &step;
            handles.push(scope.spawn(move || {
                let mut visited = vec![0u64; (total as usize).div_ceil(64)];
                let mut local: BTreeMap<u64, u64> = BTreeMap::new();
                for s in lo..hi {
                    if visited[(s / 64) as usize] >> (s % 64) & 1 == 1 {
                        continue;
                    }
                    // walk the full orbit; count it only if s is its
                    // minimum, so each orbit is counted exactly once
                    // across all workers
                    visited[(s / 64) as usize] |= 1 << (s % 64);
                    let mut len = 1u64;
                    let mut is_min = true;
                    let mut cur = step(s);
                    while cur != s {
                        visited[(cur / 64) as usize] |= 1 << (cur % 64);
                        if cur < s {
                            is_min = false;
                        }
                        len += 1;
                        cur = step(cur);
                    }
                    if is_min {
                        *local.entry(len).or_insert(0) += 1;
                    }
                }
                local
            }));
        }
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut cycles: BTreeMap<u64, BigUint> = BTreeMap::new();
    for local in counts {
        for (len, c) in local {
            let entry = cycles.entry(len).or_insert_with(BigUint::zero);
            *entry += BigUint::from(c);
        }
    }
    // derive period-dividing counts from the exact-period counts
    let divisors = intnum::divisors_sorted(t);
    let mut fixed: BTreeMap<u64, BigUint> = BTreeMap::new();
    for &d in &divisors {
        let mut count = BigUint::zero();
        for (&len, c) in &cycles {
            if d % len == 0 {
                count += c * BigUint::from(len);
            }
        }
        fixed.insert(d, count);
    }
    let census = OrbitCensus {
        states: BigUint::from(q).pow(n as u32),
        period: t,
        cycle_counts: cycles,
        fixed_point_counts: fixed,
    };
    assert_eq!(
        census.total_states_covered(),
        census.states,
        "orbits must partition the state space"
    );
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::poly::Polynomial;
    use crate::prng::Prng;
    use crate::rep::TimeGroup;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn fib(field: &Field) -> Matrix {
        Matrix::from_int_rows(field, &[&[1, 1], &[1, 0]])
    }

    fn rotation_f3() -> Matrix {
        Matrix::companion(&Polynomial::from_ints(&f3(), &[1, 0, 1]))
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_of_matrix(&Matrix::identity(&f3(), 3)).unwrap(), 1);
        assert_eq!(order_of_matrix(&fib(&f2())).unwrap(), 3);
        assert_eq!(order_of_matrix(&rotation_f3()).unwrap(), 4);
    }

    #[test]
    fn order_rejects_singular_and_rational() {
        let singular = Matrix::from_int_rows(&f2(), &[&[1, 1], &[1, 1]]);
        assert_eq!(order_of_matrix(&singular), Err(Error::SingularMatrix));
        let q = Field::rational();
        let m = Matrix::identity(&q, 2);
        assert_eq!(order_of_matrix(&m), Err(Error::RationalFieldUnsupported));
    }

    #[test]
    fn point_period_examples() {
        let k = f2();
        let rep = Representation::new(TimeGroup::Integers, fib(&k)).unwrap();
        assert_eq!(point_period(&rep, &[k.zero(), k.zero()]).unwrap(), 1);
        assert_eq!(point_period(&rep, &[k.int(1), k.int(0)]).unwrap(), 3);

        let k3 = f3();
        let rep3 = Representation::new(TimeGroup::Integers, rotation_f3()).unwrap();
        assert_eq!(point_period(&rep3, &[k3.int(1), k3.int(0)]).unwrap(), 4);
        // explicit orbit for the Fibonacci generator: (1,0) -> (1,1) -> (0,1) -> (1,0)
        let mut state = vec![k.int(1), k.int(0)];
        for _ in 0..3 {
            state = fib(&k).matvec(&state);
        }
        assert_eq!(state, vec![k.int(1), k.int(0)]);
    }

    #[test]
    fn analytic_census_identity_f3() {
        let census = orbit_census_analytic(&Matrix::identity(&f3(), 1)).unwrap();
        assert_eq!(census.period, 1);
        assert_eq!(census.cycle_counts, BTreeMap::from([(1, BigUint::from(3u32))]));
    }

    #[test]
    fn census_rotation_f3() {
        // F_1 = 1, F_2 = 1, F_4 = 9; N_4 = 8 -> two 4-cycles
        let a = rotation_f3();
        let analytic = orbit_census_analytic(&a).unwrap();
        let expect: BTreeMap<u64, BigUint> =
            BTreeMap::from([(1, BigUint::from(1u32)), (4, BigUint::from(2u32))]);
        assert_eq!(analytic.cycle_counts, expect);
        assert_eq!(
            analytic.fixed_point_counts,
            BTreeMap::from([
                (1, BigUint::from(1u32)),
                (2, BigUint::from(1u32)),
                (4, BigUint::from(9u32))
            ])
        );
        let enumerated = orbit_census_enumerate(&a, DEFAULT_MAX_STATES, 1).unwrap();
        assert_eq!(analytic, enumerated);
    }

    #[test]
    fn census_fibonacci_f2() {
        let a = fib(&f2());
        let analytic = orbit_census_analytic(&a).unwrap();
        let expect: BTreeMap<u64, BigUint> =
            BTreeMap::from([(1, BigUint::from(1u32)), (3, BigUint::from(1u32))]);
        assert_eq!(analytic.cycle_counts, expect);
        let enumerated = orbit_census_enumerate(&a, DEFAULT_MAX_STATES, 1).unwrap();
        assert_eq!(analytic, enumerated);
    }

    #[test]
    fn identity_census_all_fixed() {
        let a = Matrix::identity(&f2(), 2);
        let census = orbit_census_enumerate(&a, DEFAULT_MAX_STATES, 1).unwrap();
        assert_eq!(census.cycle_counts, BTreeMap::from([(1, BigUint::from(4u32))]));
    }

    #[test]
    fn censuses_agree_on_random_systems() {
        let mut rng = Prng::new(2718);
        for p in [2u64, 3, 5] {
            let k = Field::prime(p).unwrap();
            let mut done = 0;
            while done < 8 {
                let n = 1 + rng.below(4) as usize;
                let a = Matrix::from_fn(&k, n, n, |_, _| {
                    k.element_from_index(rng.below(p)).unwrap()
                });
                if a.inverse().is_err() {
                    continue;
                }
                done += 1;
                let analytic = orbit_census_analytic(&a).unwrap();
                let enumerated = orbit_census_enumerate(&a, DEFAULT_MAX_STATES, 1).unwrap();
                assert_eq!(analytic, enumerated);
                assert_eq!(analytic.total_states_covered(), analytic.states);
                // every census key divides T and F is monotone along divisibility
                for &key in analytic.cycle_counts.keys() {
                    assert_eq!(analytic.period % key, 0);
                }
                for (&d1, f1) in &analytic.fixed_point_counts {
                    for (&d2, f2) in &analytic.fixed_point_counts {
                        if d2 % d1 == 0 {
                            assert!(f1 <= f2, "F_{d1} > F_{d2}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_is_worker_count_invariant() {
        let a = {
            let k = f3();
            Matrix::from_int_rows(&k, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]])
        };
        let base = orbit_census_enumerate(&a, DEFAULT_MAX_STATES, 1).unwrap();
        for workers in [2, 3, 4, 7] {
            assert_eq!(orbit_census_enumerate(&a, DEFAULT_MAX_STATES, workers).unwrap(), base);
        }
    }

    #[test]
    fn enumeration_guard_trips() {
        let k = Field::prime(31).unwrap();
        let a = Matrix::identity(&k, 5); // 31^5 ~ 2.8e7
        assert!(matches!(
            orbit_census_enumerate(&a, DEFAULT_MAX_STATES, 1),
            Err(Error::StateSpaceTooLarge(_))
        ));
    }

    #[test]
    fn extension_field_census() {
        let k4 = Field::extension(2, vec![1, 1, 1]).unwrap();
        // multiplication by the generator y on F_4^1: order 3
        let y = k4.ext_generator().unwrap();
        let a = Matrix::from_rows(&k4, vec![vec![y]]).unwrap();
        let census = orbit_census_enumerate(&a, DEFAULT_MAX_STATES, 1).unwrap();
        assert_eq!(census.period, 3);
        assert_eq!(
            census.cycle_counts,
            BTreeMap::from([(1, BigUint::from(1u32)), (3, BigUint::from(1u32))])
        );
        assert_eq!(orbit_census_analytic(&a).unwrap(), census);
    }

    #[test]
    fn point_periods_divide_matrix_order() {
        let mut rng = Prng::new(404);
        let k = f3();
        let mut done = 0;
        while done < 10 {
            let a = Matrix::from_fn(&k, 3, 3, |_, _| {
                k.element_from_index(rng.below(3)).unwrap()
            });
            if a.inverse().is_err() {
                continue;
            }
            done += 1;
            let t = order_of_matrix(&a).unwrap();
            let rep = Representation::new(TimeGroup::Integers, a).unwrap();
            let mut max_seen = 1;
            for idx in 0..27u64 {
                let x0 = vec![
                    k.element_from_index(idx % 3).unwrap(),
                    k.element_from_index((idx / 3) % 3).unwrap(),
                    k.element_from_index(idx / 9).unwrap(),
                ];
                let pp = point_period(&rep, &x0).unwrap();
                assert_eq!(t % pp, 0, "point period must divide the matrix order");
                max_seen = max_seen.max(pp);
            }
            assert_eq!(max_seen, t, "some state achieves the full period");
            // the top invariant-factor generator achieves the full period
            let dec = crate::canonical::invariant_factors(rep.generator(), 0).unwrap();
            let top = dec.generators.last().unwrap();
            assert_eq!(point_period(&rep, top).unwrap(), t);
        }
    }
}
