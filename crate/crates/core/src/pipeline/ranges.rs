//! Symbolic replay of the stability-range inductions.
//!
//! Every series has a spectral sequence `E^1_{p,q}` converging to zero with
//! `E^1_{0,q}` the relative homology in question. `E^1_{0,k}` vanishes once
//! every spot with `p >= 1` and `p + q <= k + 1` is known to vanish, so the
//! calculator searches for the least `n` from which on each such spot falls
//! in a region whose vanishing follows from the input rule for general
//! linear groups, the inductive hypothesis, or the vanishing of row zero.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::group::Series;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RangeError {
    #[error("rule {name} is not monotone: threshold drops at k = {k}")]
    NotMonotone { name: String, k: usize },
    #[error("no range rule for the {0} series")]
    Unsupported(Series),
    #[error("rule {name} covers k <= {max}, but k = {k} was requested")]
    OutOfRange { name: String, max: usize, k: usize },
}

/// `thresholds[k]` is the least `n` such that the relative homology
/// `H_k(X_{n+1}, X_n; Z)` vanishes for every `n >= thresholds[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityRangeRule {
    pub name: String,
    pub thresholds: Vec<i64>,
}

impl StabilityRangeRule {
    /// `n >= slope * k + offset`, for `0 <= k <= kmax`.
    pub fn linear(name: &str, slope: i64, offset: i64, kmax: usize) -> Self {
        StabilityRangeRule { name: name.to_string(), thresholds: (0..=kmax as i64).map(|k| slope * k + offset).collect() }
    }

    /// General linear groups over a field with infinite centre: `n >= k`.
    pub fn sah(kmax: usize) -> Self {
        StabilityRangeRule::linear("GL, infinite centre (n >= k)", 1, 0, kmax)
    }

    /// General linear groups over any division ring: `n >= 2k`.
    pub fn van_der_kallen(kmax: usize) -> Self {
        StabilityRangeRule::linear("GL, any division ring (n >= 2k)", 2, 0, kmax)
    }

    pub fn kmax(&self) -> usize {
        self.thresholds.len() - 1
    }

    pub fn threshold(&self, k: usize) -> Result<i64, RangeError> {
        self.thresholds
            .get(k)
            .copied()
            .ok_or_else(|| RangeError::OutOfRange { name: self.name.clone(), max: self.kmax(), k })
    }

    /// Whether `H_k(X_{n+1}, X_n)` is known to vanish.
    pub fn vanishes(&self, k: usize, n: i64) -> Result<bool, RangeError> {
        Ok(n >= self.threshold(k)?)
    }

    pub fn check_monotone(&self) -> Result<(), RangeError> {
        match self.thresholds.windows(2).position(|w| w[1] < w[0]) {
            Some(i) => Err(RangeError::NotMonotone { name: self.name.clone(), k: i + 1 }),
            None => Ok(()),
        }
    }

    /// The rule shifted to the indexing `H_k(X_{n+2}, X_{n+1})`.
    fn shifted(&self, by: i64) -> StabilityRangeRule {
        StabilityRangeRule { name: self.name.clone(), thresholds: self.thresholds.iter().map(|t| t + by).collect() }
    }

    /// A closed form `n >= a k + b` valid from some `k0 >= 1` on, plus the
    /// finitely many exceptions below `k0`, read off the thresholds.
    pub fn closed_form(&self) -> ClosedForm {
        let t = &self.thresholds;
        let kmax = self.kmax();
        if kmax < 2 {
            return ClosedForm { slope: 0, offset: t[kmax], from: kmax, exceptions: (1..kmax).map(|k| (k, t[k])).collect() };
        }
        let slope = t[kmax] - t[kmax - 1];
        let offset = t[kmax] - slope * kmax as i64;
        let mut from = kmax;
        while from > 1 && t[from - 1] == slope * (from as i64 - 1) + offset {
            from -= 1;
        }
        ClosedForm { slope, offset, from, exceptions: (1..from).map(|k| (k, t[k])).collect() }
    }
}

/// `n >= slope * k + offset` for `k >= from`, with explicit thresholds below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    pub slope: i64,
    pub offset: i64,
    pub from: usize,
    pub exceptions: Vec<(usize, i64)>,
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rhs = match (self.slope, self.offset) {
            (0, b) => format!("{b}"),
            (1, 0) => "k".to_string(),
            (a, 0) => format!("{a}k"),
            (1, b) if b < 0 => format!("k-{}", -b),
            (1, b) => format!("k+{b}"),
            (a, b) if b < 0 => format!("{a}k-{}", -b),
            (a, b) => format!("{a}k+{b}"),
        };
        let mut parts: Vec<String> = self.exceptions.iter().map(|(k, t)| format!("n >= {t} for k = {k}")).collect();
        parts.push(if self.from <= 1 { format!("n >= {rhs}") } else { format!("n >= {rhs} for k >= {}", self.from) });
        write!(f, "{}", parts.join("; "))
    }
}

/// A region of the `E^1` page with the inequality that makes it vanish.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Region {
    pub name: &'static str,
    pub spots: &'static str,
    pub vanishing: &'static str,
}

/// Special linear groups; `E^1_{0,q} = H_q(SL_{n+2}, SL_{n+1})`.
pub const SL_REGIONS: [Region; 3] = [
    Region {
        name: "I",
        spots: "p = 1, 1 <= q <= k",
        vanishing: "E^1_{1,q} = H_q(GL_{n+1}, GL_n) = 0 once n >= gl(q)",
    },
    Region {
        name: "II",
        spots: "2 <= p <= n, q >= 1, p + q <= k + 1",
        vanishing: "relative LHS with L^2_{i,j} = 0 for j <= q once H_j(SL_{n-p+2}, SL_{n-p+1}) = 0, i.e. n - p >= sl(j) (2q - 2 + p <= 2k - 2 <= n)",
    },
    Region { name: "III", spots: "q = 0, 0 <= p <= n + 1", vanishing: "relative H_0 vanishes" },
];

/// Unitary groups; `E^1_{0,q} = H_q(U_{n+1}, U_n)`.
pub const U_REGIONS: [Region; 2] = [
    Region {
        name: "I",
        spots: "1 <= p <= n, q >= 1, p + q <= k + 1",
        vanishing: "relative LHS with H_j(GL_{n+2-p}, GL_{n+1-p}) = 0 for j <= q, i.e. n + 1 - p >= gl(j)",
    },
    Region { name: "II", spots: "q = 0, 1 <= p <= n + 1", vanishing: "relative H_0 vanishes" },
];

/// Special orthogonal groups, split form; the general linear factors of the
/// Levi subgroups act trivially, so the bookkeeping is the unitary one.
pub const SO_REGIONS: [Region; 2] = [
    Region {
        name: "I",
        spots: "1 <= p <= n, q >= 1, p + q <= k + 1",
        vanishing: "relative LHS over SO_{p-1,p-1} with H_j(GL_{n+2-p}, GL_{n+1-p}) = 0 for j <= q",
    },
    Region { name: "II", spots: "q = 0, 1 <= p <= n + 1 (p = n + 1 = k + 1 included)", vanishing: "relative H_0 vanishes" },
];

/// The spectral sequences exist from `n = 2` on for every series here.
const MIN_SEQUENCE_N: i64 = 2;

/// The derived rule for `series` from the input rule for general linear
/// groups, for `0 <= k <= gl.kmax()`. The derived rule is stated in the
/// same indexing as the input, `H_k(X_{n+1}, X_n)`.
pub fn stability_range_induction(gl: &StabilityRangeRule, series: Series) -> Result<StabilityRangeRule, RangeError> {
    gl.check_monotone()?;
    let kmax = gl.kmax();
    let name = format!("{series} from {}", gl.name);
    let thresholds = match series {
        Series::SL => {
            // Indexing of the sequence: sl[k] bounds n for H_k(SL_{n+2}, SL_{n+1}).
            // Relative H_0 always vanishes and SL is perfect, so sl[0] = sl[1] = 0.
            let mut sl: Vec<i64> = vec![0; 2.min(kmax + 1)];
            for k in 2..=kmax {
                let n = least_n(k, |n| sl_spot_vanishes(gl, &sl, n, k))?;
                sl.push(n);
            }
            StabilityRangeRule { name: name.clone(), thresholds: sl }.shifted(1).thresholds
        }
        Series::U | Series::SO | Series::Sp => {
            let mut u = vec![0];
            for k in 1..=kmax {
                u.push(least_n(k, |n| unitary_spot_vanishes(gl, n, k))?);
            }
            u
        }
        Series::GL => return Err(RangeError::Unsupported(series)),
    };
    let rule = StabilityRangeRule { name, thresholds };
    rule.check_monotone()?;
    Ok(rule)
}

/// The least `n >= 0` such that `holds(n', spot)` for all spots and all
/// `n' >= n`. Thresholds of monotone rules are at most linear in `k`, so a
/// horizon of `4k + 8` past the candidate settles "for all".
fn least_n(k: usize, holds: impl Fn(i64) -> Result<bool, RangeError>) -> Result<i64, RangeError> {
    let horizon = 4 * k as i64 + 8;
    let top = 8 * k as i64 + 16;
    let mut ok: Vec<bool> = Vec::with_capacity(top as usize + 1);
    for n in 0..=top {
        ok.push(holds(n)?);
    }
    let n = (0..=top - horizon)
        .find(|&n| (n..=n + horizon).all(|m| ok[m as usize]))
        .unwrap_or(top);
    Ok(n)
}

/// All spots `p >= 1`, `p + q <= k + 1` of the special linear sequence
/// with parameter `n` vanish.
fn sl_spot_vanishes(gl: &StabilityRangeRule, sl: &[i64], n: i64, k: usize) -> Result<bool, RangeError> {
    if n < MIN_SEQUENCE_N {
        return Ok(false);
    }
    for p in 1..=(k as i64 + 1) {
        for q in 0..=(k as i64 + 1 - p) {
            let zero = if q == 0 {
                // Region III; beyond column n + 1 no description is available.
                p <= n + 1
            } else if p == 1 {
                // Region I.
                gl.vanishes(q as usize, n)?
            } else if p <= n {
                // Region II: every coefficient row j <= q of the relative LHS vanishes.
                (1..=q as usize).all(|j| sl.get(j).is_some_and(|&t| n - p >= t))
            } else {
                false
            };
            if !zero {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All spots `p >= 1`, `p + q <= k + 1` of the unitary sequence with
/// parameter `n` vanish.
fn unitary_spot_vanishes(gl: &StabilityRangeRule, n: i64, k: usize) -> Result<bool, RangeError> {
    if n < MIN_SEQUENCE_N {
        return Ok(false);
    }
    for p in 1..=(k as i64 + 1) {
        for q in 0..=(k as i64 + 1 - p) {
            let zero = if q == 0 {
                p <= n + 1
            } else if p <= n {
                let mut all = true;
                for j in 1..=q as usize {
                    all &= gl.vanishes(j, n + 1 - p)?;
                }
                all
            } else {
                false
            };
            if !zero {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Region table for a series, for reports.
pub fn regions(series: Series) -> &'static [Region] {
    match series {
        Series::SL => &SL_REGIONS,
        Series::U | Series::Sp => &U_REGIONS,
        Series::SO => &SO_REGIONS,
        Series::GL => &[],
    }
}
