//! k-separability bounds for the complete-graph class and the noise functions
//! built on them.
//!
//! A pure k-product state splits the register into parts of sizes
//! `m_1 + ... + m_k = n`. Inside the complete-graph class each part of size
//! `m` contributes a factor `sqrt(2^{m-1} + s_m)` to the tensor norm, and the
//! norm is multiplicative across parts, so the largest admissible product
//! bounds every k-separable mixture. Admissible partitions contain at most one
//! part of size 2.

use std::fmt;

use crate::correlation::{pure_tensor, TensorOptions};
use crate::error::{invalid, Result};
use crate::stabilizer::cg_support_count;
use crate::states::{all_ones_state, ghz_state, Family};

/// Which multisets of part sizes enter the maximization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PartitionRule {
    /// At most one part equal to 2.
    #[default]
    AtMostOneTwo,
    /// Every partition into `k` parts.
    Unrestricted,
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if n == 0 || n > 64 {
        return Err(invalid(format!("qubit count must be in 1..=64, got {n}")));
    }
    if k < 1 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(())
}

/// Multisets of `k` positive parts summing to `n`, each sorted ascending, in
/// lexicographic order.
pub fn partitions(n: usize, k: usize, rule: PartitionRule) -> Result<Vec<Vec<usize>>> {
    check_nk(n, k)?;
    fn fill(rest: usize, slots: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // the remaining slots all take at least `part`
        let mut part = min;
        while part * slots <= rest {
            cur.push(part);
            fill(rest - part, slots - 1, part, cur, out);
            cur.pop();
            part += 1;
        }
    }
    let mut out = Vec::new();
    fill(n, k, 1, &mut Vec::with_capacity(k), &mut out);
    if rule == PartitionRule::AtMostOneTwo {
        out.retain(|parts| parts.iter().filter(|&&m| m == 2).count() <= 1);
    }
    Ok(out)
}

pub fn admissible_partitions(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    partitions(n, k, PartitionRule::AtMostOneTwo)
}

/// `2^{m-1} + s_m`, the squared norm of an `m`-qubit complete graph state.
pub fn part_norm_sq(m: usize) -> u64 {
    cg_support_count(m)
}

pub fn part_norm(m: usize) -> f64 {
    (part_norm_sq(m) as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionBound {
    pub n: usize,
    pub k: usize,
    /// Maximizing part sizes, ascending.
    pub parts: Vec<usize>,
    /// Exact squared bound, `prod (2^{m_i-1} + s_i)`.
    pub bound_sq: u128,
    pub bound: f64,
    pub per_part_s: Vec<u8>,
}

impl PartitionBound {
    /// `"1|2|4"`.
    pub fn partition_label(&self) -> String {
        self.parts
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join("|")
    }
}

fn product_sq(parts: &[usize]) -> u128 {
    parts.iter().map(|&m| u128::from(part_norm_sq(m))).product()
}

/// Largest product bound over partitions admitted by `rule`. Ties keep the
/// lexicographically first partition.
pub fn k_sep_bound_with(n: usize, k: usize, rule: PartitionRule) -> Result<PartitionBound> {
    let (parts, bound_sq) = partitions(n, k, rule)?
        .into_iter()
        .map(|p| {
            let sq = product_sq(&p);
            (p, sq)
        })
        .fold(None::<(Vec<usize>, u128)>, |best, cand| match best {
            Some(b) if b.1 >= cand.1 => Some(b),
            _ => Some(cand),
        })
        .ok_or_else(|| invalid(format!("no admissible partition of {n} into {k} parts")))?;
    let per_part_s = parts.iter().map(|&m| u8::from(m % 2 == 0)).collect();
    Ok(PartitionBound {
        n,
        k,
        parts,
        bound_sq,
        bound: (bound_sq as f64).sqrt(),
        per_part_s,
    })
}

pub fn k_sep_bound(n: usize, k: usize) -> Result<PartitionBound> {
    k_sep_bound_with(n, k, PartitionRule::AtMostOneTwo)
}

/// Closed-form biseparability bound: split off `b = 1` qubit when
/// `ceil(n/2) <= 2`, else `b = 2`.
pub fn biseparable_bound(n: usize) -> Result<f64> {
    if !(3..=64).contains(&n) {
        return Err(invalid(format!("biseparable bound needs 3 <= n <= 64, got {n}")));
    }
    let b = if n.div_ceil(2) <= 2 { 1 } else { 2 };
    Ok(((part_norm_sq(b) as f64) * (part_norm_sq(n - b) as f64)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    NonKSeparable,
    /// The criterion is only sufficient; this never certifies separability.
    Inconclusive,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::NonKSeparable => "NonKSeparable",
            Outcome::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub norm: f64,
    pub bound: f64,
    pub k: usize,
}

/// Non-k-separable iff `norm` strictly exceeds the k-separability bound.
pub fn detect(norm: f64, n: usize, k: usize) -> Result<Verdict> {
    if !(norm >= 0.0) {
        return Err(invalid(format!("tensor norm must be non-negative, got {norm}")));
    }
    let bound = k_sep_bound(n, k)?.bound;
    let outcome = if norm > bound {
        Outcome::NonKSeparable
    } else {
        Outcome::Inconclusive
    };
    Ok(Verdict {
        outcome,
        norm,
        bound,
        k,
    })
}

/// Squared tensor norm of `(1-p) |psi><psi| + p |1..1><1..1|` as a quadratic
/// in `p`: `(1-p)^2 base + 2p(1-p) cross + p^2 noise`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseQuadratic {
    pub base: f64,
    pub cross: f64,
    pub noise: f64,
}

impl NoiseQuadratic {
    /// Closed form for the complete graph state: its support never contains
    /// `Z^{⊗n}`, so the cross term vanishes.
    pub fn complete_graph(n: usize) -> Self {
        Self {
            base: part_norm_sq(n) as f64,
            cross: 0.0,
            noise: 1.0,
        }
    }

    /// Coefficients read off the GHZ and `|1..1>` correlation tensors.
    pub fn ghz(n: usize) -> Result<Self> {
        let opts = TensorOptions::default();
        let ghz = pure_tensor(&ghz_state(n)?, &opts)?;
        let ones = pure_tensor(&all_ones_state(n)?, &opts)?;
        Ok(Self {
            base: ghz.norm_sq(),
            cross: ghz.dot(&ones)?,
            noise: ones.norm_sq(),
        })
    }

    pub fn for_family(n: usize, family: Family) -> Result<Self> {
        match family {
            Family::Cg => {
                check_nk(n, 1)?;
                Ok(Self::complete_graph(n))
            }
            Family::Ghz => Self::ghz(n),
            other => Err(invalid(format!("noise analysis supports cg and ghz, not {other}"))),
        }
    }

    pub fn eval(&self, p: f64) -> f64 {
        let q = 1.0 - p;
        q * q * self.base + 2.0 * p * q * self.cross + p * p * self.noise
    }

    /// `(a, b, c)` with `eval(p) = a p^2 + b p + c`.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        (
            self.base - 2.0 * self.cross + self.noise,
            2.0 * self.cross - 2.0 * self.base,
            self.base,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct XiResult {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    /// Squared tensor norm of the noisy state.
    pub numerator: f64,
    /// Squared k-separability bound.
    pub denominator: f64,
    pub xi: f64,
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("noise probability must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Ratio of squared norm to squared bound; `xi > 1` certifies
/// non-k-separability.
pub fn xi_noise(n: usize, k: usize, p: f64, family: Family) -> Result<XiResult> {
    check_p(p)?;
    let bound = k_sep_bound(n, k)?;
    let numerator = match family {
        Family::Cg => {
            let a = part_norm_sq(n) as f64;
            a * (1.0 - 2.0 * p) + (a + 1.0) * p * p
        }
        _ => NoiseQuadratic::for_family(n, family)?.eval(p),
    };
    let denominator = bound.bound_sq as f64;
    Ok(XiResult {
        n,
        k,
        p,
        numerator,
        denominator,
        xi: numerator / denominator,
    })
}

/// Like [`xi_noise`] over a grid, reusing one set of quadratic coefficients.
pub fn xi_sweep(n: usize, k: usize, ps: &[f64], family: Family) -> Result<Vec<XiResult>> {
    let quad = NoiseQuadratic::for_family(n, family)?;
    let denominator = k_sep_bound(n, k)?.bound_sq as f64;
    ps.iter()
        .map(|&p| {
            check_p(p)?;
            let numerator = match family {
                Family::Cg => xi_noise(n, k, p, family)?.numerator,
                _ => quad.eval(p),
            };
            Ok(XiResult {
                n,
                k,
                p,
                numerator,
                denominator,
                xi: numerator / denominator,
            })
        })
        .collect()
}

/// Smallest `p` in `[0, 1]` where the squared norm meets the squared bound.
pub fn threshold_p(n: usize, k: usize, family: Family) -> Result<Option<f64>> {
    let quad = NoiseQuadratic::for_family(n, family)?;
    let denominator = k_sep_bound(n, k)?.bound_sq as f64;
    let (a, b, c0) = quad.coefficients();
    let c = c0 - denominator;
    const EPS: f64 = 1e-12;
    let roots: Vec<f64> = if a.abs() < EPS {
        if b.abs() < EPS {
            vec![]
        } else {
            vec![-c / b]
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            vec![]
        } else {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q == 0.0 {
                vec![0.0]
            } else {
                vec![q / a, c / q]
            }
        }
    };
    Ok(roots
        .into_iter()
        .filter(|r| (-EPS..=1.0 + EPS).contains(r))
        .map(|r| r.clamp(0.0, 1.0))
        .min_by(f64::total_cmp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(parts: Vec<Vec<usize>>) -> Vec<String> {
        parts
            .iter()
            .map(|p| p.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("|"))
            .collect()
    }

    #[test]
    fn partition_examples() {
        assert_eq!(labels(admissible_partitions(5, 3).unwrap()), ["1|1|3"]);
        assert_eq!(labels(partitions(5, 3, PartitionRule::Unrestricted).unwrap()), ["1|1|3", "1|2|2"]);
        assert_eq!(labels(admissible_partitions(4, 2).unwrap()), ["1|3"]);
        assert_eq!(labels(admissible_partitions(6, 6).unwrap()), ["1|1|1|1|1|1"]);
        assert_eq!(labels(admissible_partitions(7, 1).unwrap()), ["7"]);
        assert!(admissible_partitions(3, 4).is_err());
        assert!(admissible_partitions(3, 0).is_err());
    }

    #[test]
    fn part_norms() {
        assert_eq!(part_norm(1), 1.0);
        assert_eq!(part_norm(2), 3f64.sqrt());
        assert_eq!(part_norm(4), 3.0);
    }

    #[test]
    fn named_bounds() {
        let b = k_sep_bound(6, 3).unwrap();
        assert_eq!((b.partition_label().as_str(), b.bound_sq), ("1|2|3", 12));
        assert_eq!(b.per_part_s, [0, 1, 0]);
        let b = k_sep_bound(8, 2).unwrap();
        assert_eq!((b.partition_label().as_str(), b.bound_sq), ("2|6", 99));
        let b = k_sep_bound(9, 4).unwrap();
        assert_eq!((b.partition_label().as_str(), b.bound_sq), ("1|1|2|5", 48));
        // the unfiltered maximum may use several pairs
        let b = k_sep_bound_with(4, 2, PartitionRule::Unrestricted).unwrap();
        assert_eq!((b.partition_label().as_str(), b.bound_sq), ("2|2", 9));
    }

    #[test]
    fn biseparable_closed_form() {
        assert!((biseparable_bound(3).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((biseparable_bound(5).unwrap() - 12f64.sqrt()).abs() < 1e-15);
        assert!((biseparable_bound(7).unwrap() - 48f64.sqrt()).abs() < 1e-15);
        for n in 3..=40 {
            assert!((biseparable_bound(n).unwrap() - k_sep_bound(n, 2).unwrap().bound).abs() < 1e-9 * k_sep_bound(n, 2).unwrap().bound, "n = {n}");
        }
        assert!(biseparable_bound(2).is_err());
    }

    #[test]
    fn detect_examples() {
        let v = detect(33f64.sqrt(), 6, 2).unwrap();
        assert_eq!(v.outcome, Outcome::NonKSeparable);
        let v = detect(27f64.sqrt(), 6, 2).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(detect(-1.0, 6, 2).is_err());
        assert!(detect(f64::NAN, 6, 2).is_err());
    }

    #[test]
    fn xi_examples() {
        let r = xi_noise(6, 2, 0.0, Family::Cg).unwrap();
        assert!((r.xi - 33.0 / 27.0).abs() < 1e-15);
        let r = xi_noise(6, 6, 0.5, Family::Cg).unwrap();
        assert!((r.xi - 8.5).abs() < 1e-12);
        for n in 2..=12 {
            assert!((xi_noise(n, n, 1.0, Family::Cg).unwrap().numerator - 1.0).abs() < 1e-12);
        }
        assert!(xi_noise(6, 2, 1.5, Family::Cg).is_err());
        assert!(xi_noise(6, 2, 0.5, Family::W).is_err());
    }

    #[test]
    fn thresholds() {
        let p = threshold_p(6, 2, Family::Cg).unwrap().unwrap();
        let exact = (66.0 - 3540f64.sqrt()) / 68.0;
        assert!((p - exact).abs() < 1e-14);
        assert!((threshold_p(3, 3, Family::Cg).unwrap().unwrap() - 0.6).abs() < 1e-14);
        // large even n approaches 1 - sqrt(3)/2
        let far = threshold_p(40, 2, Family::Cg).unwrap().unwrap();
        assert!((far - (1.0 - 3f64.sqrt() / 2.0)).abs() < 1e-6);
    }

    #[test]
    fn quadratic_forms_agree_for_complete_graph() {
        for n in 2..=10 {
            let q = NoiseQuadratic::complete_graph(n);
            for i in 0..=10 {
                let p = i as f64 / 10.0;
                let closed = xi_noise(n, n, p, Family::Cg).unwrap().numerator;
                assert!((q.eval(p) - closed).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn ghz_quadratic_even_and_odd() {
        for n in 2..=8 {
            let q = NoiseQuadratic::ghz(n).unwrap();
            let base = (1u64 << (n - 1)) as f64 + if n % 2 == 0 { 1.0 } else { 0.0 };
            assert!((q.base - base).abs() < 1e-9);
            let cross = if n % 2 == 0 { 1.0 } else { 0.0 };
            assert!((q.cross - cross).abs() < 1e-9);
            assert!((q.noise - 1.0).abs() < 1e-9);
        }
    }
}
