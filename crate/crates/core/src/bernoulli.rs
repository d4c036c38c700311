//! Bernoulli numbers `B_n`, order-`r` Bernoulli numbers `B_n^{(r)}` and the
//! polynomials `B_n^{(r)}(x)`.
//!
//! The primary route expands `(t/(e^t - 1))^r` as a truncated power series and
//! memoizes whole rows of coefficients. The independent route uses the classical
//! recurrence `Σ_{k≤n} C(n+1, k) B_k = 0` together with the convolution identity
//! `B_n^{(r+1)} = Σ_k C(n, k) B_k^{(r)} B_{n-k}`. Tests compare the two.
//!
//! A [`BernoulliCache`] can be persisted as text, one record per line:
//!
//! ```text
//! r n num/den
//! ```
//!
//! sorted by `(r, n)`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::rational::{binomial, factorial, format_rational, parse_rational, rat_int};
use crate::arith::{Rational, TruncSeries};
use crate::error::{MathError, Result};

/// Thread-safe memo of `B_n^{(r)}` keyed by `(r, n)`.
#[derive(Debug, Default)]
pub struct BernoulliCache {
    table: RwLock<HashMap<(u32, u32), Rational>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide cache used by the free functions of this module.
    pub fn global() -> &'static BernoulliCache {
        static GLOBAL: OnceLock<BernoulliCache> = OnceLock::new();
        GLOBAL.get_or_init(BernoulliCache::new)
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `B_n^{(r)}`, computing and memoizing the row `B_0^{(j)}..B_{K-1}^{(j)}` for
    /// every `j ≤ r` on a miss.
    pub fn get(&self, n: u32, r: u32) -> Result<Rational> {
        check_order(r)?;
        if let Some(v) = self.table.read().unwrap().get(&(r, n)) {
            return Ok(v.clone());
        }
        let k = ((n as usize) + 1).next_power_of_two().max(16);
        let base = bernoulli_generating_series(k);
        let mut power = base.clone();
        let mut rows = Vec::with_capacity(r as usize);
        for j in 1..=r {
            if j > 1 {
                power = power.mul(&base)?;
            }
            rows.push((j, coefficients_to_numbers(&power)));
        }
        let mut table = self.table.write().unwrap();
        for (j, row) in rows {
            for (idx, v) in row.into_iter().enumerate() {
                table.entry((j, idx as u32)).or_insert(v);
            }
        }
        Ok(table[&(r, n)].clone())
    }

    /// Inserts a value; an existing entry is kept (writes are idempotent).
    pub fn insert(&self, n: u32, r: u32, value: Rational) {
        self.table.write().unwrap().entry((r, n)).or_insert(value);
    }

    /// All cached records sorted by `(r, n)`.
    pub fn records(&self) -> Vec<(u32, u32, Rational)> {
        let mut out: Vec<_> = self
            .table
            .read()
            .unwrap()
            .iter()
            .map(|(&(r, n), v)| (r, n, v.clone()))
            .collect();
        out.sort_by_key(|&(r, n, _)| (r, n));
        out
    }

    pub fn to_text(&self) -> String {
        self.records()
            .into_iter()
            .map(|(r, n, v)| format!("{r} {n} {}\n", format_rational(&v)))
            .collect()
    }

    /// Merges records in the `r n num/den` format into the cache.
    pub fn load_text(&self, text: &str) -> Result<usize> {
        let mut count = 0;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = || MathError::Parse(format!("cache line {}: {line:?}", lineno + 1));
            let mut parts = line.split_whitespace();
            let (Some(r), Some(n), Some(v), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(bad());
            };
            let r: u32 = r.parse().map_err(|_| bad())?;
            let n: u32 = n.parse().map_err(|_| bad())?;
            if r == 0 {
                return Err(bad());
            }
            self.insert(n, r, parse_rational(v)?);
            count += 1;
        }
        Ok(count)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| MathError::Io(e.to_string()))
    }

    /// Loads a cache file if it exists; returns the number of records read.
    pub fn load(&self, path: &Path) -> Result<usize> {
        match fs::read_to_string(path) {
            Ok(text) => self.load_text(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(0),
            Err(e) => Err(MathError::Io(e.to_string())),
        }
    }
}

fn check_order(r: u32) -> Result<()> {
    if r == 0 {
        return Err(MathError::Domain("Bernoulli order r must be at least 1".into()));
    }
    Ok(())
}

fn coefficients_to_numbers(series: &TruncSeries<Rational>) -> Vec<Rational> {
    series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c * rat_int(factorial(n as u64)))
        .collect()
}

/// `t/(e^t - 1)` to order `k`, as the inverse of `(e^t - 1)/t = Σ t^j/(j+1)!`.
pub fn bernoulli_generating_series(k: usize) -> TruncSeries<Rational> {
    let coeffs = (0..k.max(1))
        .map(|j| rat_int(factorial(j as u64 + 1)).recip())
        .collect();
    TruncSeries::new(coeffs)
        .and_then(|d| d.inv())
        .expect("constant term 1 is invertible")
}

/// `B_n`, with `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> Rational {
    BernoulliCache::global().get(n, 1).expect("r = 1 is valid")
}

/// `B_n^{(r)}`: `n!` times the `t^n` coefficient of `(t/(e^t - 1))^r`.
pub fn multi_bernoulli(n: u32, r: u32) -> Result<Rational> {
    BernoulliCache::global().get(n, r)
}

/// Coefficients of `B_n^{(r)}(x)` in ascending powers of `x`:
/// the coefficient of `x^j` is `C(n, j) B_{n-j}^{(r)}`.
pub fn multi_bernoulli_poly_coeffs(n: u32, r: u32) -> Result<Vec<Rational>> {
    (0..=n)
        .map(|j| {
            let b = multi_bernoulli(n - j, r)?;
            Ok(b * rat_int(binomial(n as u64, j as u64)))
        })
        .collect()
}

/// Evaluates a polynomial given by ascending coefficients.
pub fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs
        .iter()
        .rev()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// `B_n^{(r)}(x) = Σ_{k=0}^{n} C(n, k) B_k^{(r)} x^{n-k}`.
pub fn multi_bernoulli_poly(n: u32, r: u32, x: &Rational) -> Result<Rational> {
    Ok(eval_poly(&multi_bernoulli_poly_coeffs(n, r)?, x))
}

/// `B_n^{(r)}` read off a freshly built series power, bypassing every cache.
pub fn multi_bernoulli_series(n: u32, r: u32) -> Result<Rational> {
    check_order(r)?;
    let g = bernoulli_generating_series(n as usize + 1).pow(r);
    Ok(g.coeff(n as usize) * rat_int(factorial(n as u64)))
}

/// `B_n^{(r)}(x)` as `n!` times the `t^n` coefficient of `(t/(e^t-1))^r e^{xt}`.
pub fn multi_bernoulli_poly_series(n: u32, r: u32, x: &Rational) -> Result<Rational> {
    check_order(r)?;
    let k = n as usize + 1;
    let g = bernoulli_generating_series(k).pow(r);
    let prod = g.mul(&TruncSeries::exp_linear(x, k)?)?;
    Ok(prod.coeff(n as usize) * rat_int(factorial(n as u64)))
}

/// `B_0..=B_{n_max}` from the recurrence `Σ_{k=0}^{n} C(n+1, k) B_k = 0`.
pub fn bernoulli_recurrence_table(n_max: u32) -> Vec<Rational> {
    let mut out: Vec<Rational> = vec![Rational::one()];
    for n in 1..=n_max as u64 {
        let s = out
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (k, b)| {
                acc + b * rat_int(binomial(n + 1, k as u64))
            });
        out.push(-s / rat_int(BigInt::from(n + 1)));
    }
    out
}

/// `B_0^{(r)}..=B_{n_max}^{(r)}` by repeated binomial convolution with the
/// recurrence-based `B_n`, independent of any power series.
pub fn multi_bernoulli_convolution_table(n_max: u32, r: u32) -> Result<Vec<Rational>> {
    check_order(r)?;
    let base = bernoulli_recurrence_table(n_max);
    let mut cur = base.clone();
    for _ in 1..r {
        cur = binomial_convolution(&cur, &base);
    }
    Ok(cur)
}

/// `c_n = Σ_k C(n, k) a_k b_{n-k}`: the exponential-generating-function product.
pub fn binomial_convolution(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().min(b.len());
    (0..len)
        .map(|n| {
            (0..=n).fold(Rational::zero(), |acc, k| {
                acc + &a[k] * &b[n - k] * rat_int(binomial(n as u64, k as u64))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn classical_values() {
        assert_eq!(bernoulli(0), rat(1, 1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), rat(0, 1));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        for k in 1..20 {
            assert!(bernoulli(2 * k + 1).is_zero());
        }
    }

    #[test]
    fn order_r_values() {
        for n in 0..=10 {
            assert_eq!(multi_bernoulli(n, 1).unwrap(), bernoulli(n));
        }
        for r in 1..6 {
            assert_eq!(multi_bernoulli(0, r).unwrap(), rat(1, 1));
        }
        assert_eq!(multi_bernoulli(1, 2).unwrap(), rat(-1, 1));
        // (1 - t/2 + t²/12)^2 = 1 - t + 5t²/12 - t³/12 + ...
        assert_eq!(multi_bernoulli(2, 2).unwrap(), rat(5, 6));
        assert_eq!(multi_bernoulli(3, 2).unwrap(), rat(-1, 2));
        assert!(matches!(multi_bernoulli(3, 0), Err(MathError::Domain(_))));
    }

    #[test]
    fn polynomial_values() {
        let x = rat(3, 7);
        assert_eq!(multi_bernoulli_poly(1, 1, &x).unwrap(), &x - rat(1, 2));
        for n in 0..6 {
            for r in 1..4 {
                assert_eq!(
                    multi_bernoulli_poly(n, r, &rat(0, 1)).unwrap(),
                    multi_bernoulli(n, r).unwrap()
                );
            }
        }
        // B_2(x) = x² - x + 1/6
        assert_eq!(
            multi_bernoulli_poly(2, 1, &x).unwrap(),
            &x * &x - &x + rat(1, 6)
        );
    }

    #[test]
    fn dual_route_equivalence() {
        let rec = bernoulli_recurrence_table(12);
        for (n, b) in rec.iter().enumerate() {
            assert_eq!(*b, bernoulli(n as u32));
        }
        for r in 1..=4 {
            let conv = multi_bernoulli_convolution_table(12, r).unwrap();
            for n in 0..=12 {
                assert_eq!(multi_bernoulli(n, r).unwrap(), conv[n as usize], "n={n} r={r}");
                assert_eq!(multi_bernoulli_series(n, r).unwrap(), conv[n as usize]);
            }
        }
    }

    #[test]
    fn convolution_identity() {
        for r in 1..=3 {
            for s in 1..=3 {
                let a: Vec<_> = (0..=10).map(|n| multi_bernoulli(n, r).unwrap()).collect();
                let b: Vec<_> = (0..=10).map(|n| multi_bernoulli(n, s).unwrap()).collect();
                let c = binomial_convolution(&a, &b);
                for n in 0..=10 {
                    assert_eq!(c[n as usize], multi_bernoulli(n, r + s).unwrap());
                }
            }
        }
    }

    #[test]
    fn cache_text_round_trip() {
        let cache = BernoulliCache::new();
        cache.get(3, 2).unwrap();
        let text = cache.to_text();
        assert!(text.starts_with("1 0 1\n1 1 -1/2\n"));
        let other = BernoulliCache::new();
        assert_eq!(other.load_text(&text).unwrap(), cache.len());
        assert_eq!(other.records(), cache.records());
        assert!(other.load_text("1 2").is_err());
        assert!(other.load_text("0 2 1/6").is_err());
    }

    #[test]
    fn cache_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("mvlp-bern-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bernoulli.txt");
        let cache = BernoulliCache::new();
        cache.get(20, 3).unwrap();
        cache.save(&path).unwrap();
        let loaded = BernoulliCache::new();
        assert_eq!(loaded.load(&path).unwrap(), cache.len());
        assert_eq!(loaded.get(20, 3).unwrap(), cache.get(20, 3).unwrap());
        assert_eq!(BernoulliCache::new().load(&dir.join("missing")).unwrap(), 0);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn concurrent_lookups_agree() {
        let cache = BernoulliCache::new();
        let results: Vec<Rational> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8)
                .map(|i| {
                    let cache = &cache;
                    s.spawn(move || cache.get(30 + i % 3, 2).unwrap())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for (i, v) in results.iter().enumerate() {
            assert_eq!(*v, multi_bernoulli(30 + (i as u32) % 3, 2).unwrap());
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn poly_matches_generating_function(n in 0u32..=6, r in 1u32..=3, x in small_rational()) {
            prop_assert_eq!(
                multi_bernoulli_poly(n, r, &x).unwrap(),
                multi_bernoulli_poly_series(n, r, &x).unwrap()
            );
        }

        #[test]
        fn addition_identity(n in 0u32..=7, r in 1u32..=3, x in small_rational(), y in small_rational()) {
            let lhs = multi_bernoulli_poly(n, r, &(&x + &y)).unwrap();
            let rhs = (0..=n).fold(Rational::zero(), |acc, k| {
                acc + multi_bernoulli_poly(k, r, &x).unwrap()
                    * rat_int(binomial(n as u64, k as u64))
                    * num_traits::pow(y.clone(), (n - k) as usize)
            });
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn order_one_is_classical_polynomial(n in 0u32..=8, x in small_rational()) {
            let classical = (0..=n).fold(Rational::zero(), |acc, k| {
                acc + bernoulli(k) * rat_int(binomial(n as u64, k as u64))
                    * num_traits::pow(x.clone(), (n - k) as usize)
            });
            prop_assert_eq!(multi_bernoulli_poly(n, 1, &x).unwrap(), classical);
        }
    }
}
