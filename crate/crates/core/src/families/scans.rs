//! Numeric sweeps over the inequalities on the `zeta` / `eta` ratios and
//! the `q_j`, `delta_j` sequences that the family certificates rely on,
//! and over the circle bound of the error polynomials.

use std::ops::RangeInclusive;

use rug::Float;
use serde::Serialize;

use super::{e_r_of, sequences, FamilyId, FamilySequences};
use crate::certify::{certified_max_on_circle, MAX_SAMPLES};
use crate::complex::pow2;
use crate::error::Result;
use crate::special::{eta, eta0, eta0_even_value, eta_even_value, zeta, zeta_even_value};

/// One evaluated inequality `lhs < rhs`.
///
/// Lower bounds `0 < x` are recorded with `lhs = 0` and `rhs = x`. `j` is
/// the inner index of the part (`j`, `n` or `r`).
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub part: String,
    pub k: usize,
    pub j: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`, computed before rounding to double.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub violations: usize,
    pub notes: Vec<String>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn failing(&self) -> impl Iterator<Item = &ScanRow> {
        self.rows.iter().filter(|r| !r.holds)
    }

    /// Smallest margin per part, in first-seen part order.
    pub fn min_margins(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = Vec::new();
        for row in &self.rows {
            match out.iter_mut().find(|(p, _)| *p == row.part) {
                Some((_, m)) => *m = m.min(row.margin),
                None => out.push((row.part.clone(), row.margin)),
            }
        }
        out
    }

    pub fn extend(&mut self, other: ScanReport) {
        self.violations += other.violations;
        self.rows.extend(other.rows);
        self.notes.extend(other.notes);
    }

    fn upper(&mut self, part: &str, k: usize, j: usize, lhs: &Float, rhs: &Float) {
        let margin = Float::with_val(lhs.prec(), rhs - lhs);
        let holds = margin > 0;
        if !holds {
            self.violations += 1;
        }
        self.rows.push(ScanRow {
            part: part.to_string(),
            k,
            j,
            lhs: lhs.to_f64(),
            rhs: rhs.to_f64(),
            margin: margin.to_f64(),
            holds,
        });
    }

    fn lower(&mut self, part: &str, k: usize, j: usize, x: &Float) {
        self.upper(part, k, j, &Float::new(x.prec()), x);
    }

    fn skip(&mut self, part: &str, k: usize, min_k: usize) {
        self.notes
            .push(format!("part {part}: k = {k} skipped (needs k >= {min_k})"));
    }
}

fn scan_precision(prec: u32, k_range: &RangeInclusive<usize>) -> u32 {
    prec + 4 * *k_range.end() as u32 + 64
}

fn abs_diff(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec(), a - b).abs()
}

fn ratio(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec(), a / b)
}

fn pow4(wp: u32, e: i64) -> Float {
    pow2(wp, 2 * e as i32)
}

fn odd_ratio(j: usize, wp: u32) -> Float {
    Float::with_val(wp, (2 * j - 1) as u32) / (2 * j - 3) as u32
}

/// `sum_{j=from}^{to} |v_{j-1} - v_j|`.
fn diff_sum(v: &[Float], from: usize, to: usize, wp: u32) -> Float {
    let mut s = Float::new(wp);
    for j in from..=to {
        s += abs_diff(&v[j - 1], &v[j]);
    }
    s
}

fn symmetry_row(report: &mut ScanReport, part: &str, s: &FamilySequences, wp: u32) {
    let tol = pow2(wp, -(wp as i32) / 2);
    for j in 0..=s.k / 2 {
        report.upper(part, s.k, j, &abs_diff(&s.q[j], &s.q[s.k - j]), &tol);
    }
}

/// Bounds on `zeta(n)`, on `zeta(2k-2j)/zeta(2k)` and `zeta(2k-1)/zeta(2k)`,
/// and on the first differences of `delta_j` and `q_j` of family P and
/// their partial sums.
///
/// Parts whose domain excludes a given `k` are skipped with a note. All
/// comparisons run at `prec + 4 k_max + 64` bits.
pub fn lemma3_scan(k_range: RangeInclusive<usize>, prec: u32) -> Result<ScanReport> {
    let wp = scan_precision(prec, &k_range);
    let mut report = ScanReport::default();
    for k in k_range {
        if k == 0 {
            continue;
        }
        for n in [2 * k - 1, 2 * k] {
            if n < 2 {
                continue;
            }
            let z = if n % 2 == 0 {
                zeta_even_value(n as u32, wp)
            } else {
                zeta(n as f64, wp)?.value
            };
            let one = Float::with_val(wp, 1);
            report.upper("i.lower", k, n, &one, &z);
            let mut rhs = Float::with_val(wp, (n + 1) as u32) / (n - 1) as u32;
            rhs *= pow2(wp, -(n as i32));
            rhs += 1;
            report.upper("i.upper", k, n, &z, &rhs);
        }
        if k < 2 {
            report.skip("ii-vii", k, 2);
            continue;
        }
        let zk = zeta_even_value(2 * k as u32, wp);
        for j in 1..k {
            let mut x = ratio(&zeta_even_value((2 * k - 2 * j) as u32, wp), &zk);
            x -= 1;
            report.lower("ii.lower", k, j, &x);
            let rhs = pow4(wp, j as i64 - k as i64) * 3u32;
            report.upper("ii.upper", k, j, &x, &Float::with_val(wp, rhs));
        }
        if k >= 11 {
            let mut x = ratio(&zeta((2 * k - 1) as f64, wp)?.value, &zk);
            x -= 1;
            report.lower("iii.lower", k, 0, &x);
            let rhs = Float::with_val(wp, pow4(wp, -(k as i64)) * 11u32) / 5u32;
            report.upper("iii.upper", k, 0, &x, &rhs);
        } else {
            report.skip("iii", k, 11);
        }
        let s = sequences(FamilyId::P, k, wp)?;
        if k >= 4 {
            for j in 1..k {
                let lhs = abs_diff(&s.delta[j - 1], &s.delta[j]);
                let rhs = if j == 1 {
                    Float::with_val(wp, pow4(wp, -(k as i64)) * 21u32)
                } else {
                    let mut t = pow4(wp, j as i64);
                    t += odd_ratio(j, wp);
                    t *= pow4(wp, -(k as i64));
                    t * 3u32
                };
                report.upper("iv", k, j, &lhs, &rhs);
            }
        } else {
            report.skip("iv", k, 4);
        }
        symmetry_row(&mut report, "v.symmetry", &s, wp);
        for j in 2..=k / 2 {
            let lhs = abs_diff(&s.q[j - 1], &s.q[j]);
            let mut rhs = pow4(wp, j as i64);
            rhs += odd_ratio(j, wp);
            rhs *= pow4(wp, -(k as i64));
            rhs *= 3u32;
            rhs += odd_ratio(j, wp) * pow4(wp, 1 - j as i64);
            report.upper("v", k, j, &lhs, &rhs);
        }
        if k >= 4 {
            for r in 4..=k {
                let lhs = diff_sum(&s.delta, 1, r, wp);
                let rhs = Float::with_val(wp, pow4(wp, r as i64 - k as i64) * 5u32);
                report.upper("vi", k, r, &lhs, &rhs);
            }
        } else {
            report.skip("vi", k, 4);
        }
        if k >= 10 {
            for r in 4..=k / 2 {
                let lhs = diff_sum(&s.q, r + 1, k / 2, wp);
                let mut rhs = Float::with_val(wp, pow2(wp, -(k as i32)) * 5u32);
                rhs += Float::with_val(wp, pow4(wp, -(r as i64)) * 12u32) / 7u32;
                report.upper("vii", k, r, &lhs, &rhs);
            }
        } else {
            report.skip("vii", k, 10);
        }
    }
    Ok(report)
}

/// The analogous bounds for the `eta_0` (family Q) and `eta` (family W)
/// quantities. Part names carry a `.eta0` or `.eta` suffix.
pub fn lemma5_scan(k_range: RangeInclusive<usize>, prec: u32) -> Result<ScanReport> {
    let wp = scan_precision(prec, &k_range);
    let mut report = ScanReport::default();
    for k in k_range {
        if k == 0 {
            continue;
        }
        for n in [2 * k - 1, 2 * k] {
            if n < 2 {
                continue;
            }
            let (e0, e) = if n % 2 == 0 {
                (eta0_even_value(n as u32, wp), eta_even_value(n as u32, wp))
            } else {
                (eta0(n as f64, wp)?.value, eta(n as f64, wp)?.value)
            };
            let one = Float::with_val(wp, 1);
            report.upper("i.lower.eta0", k, n, &one, &e0);
            report.upper("i.upper.eta0", k, n, &e0, &(pow2(wp, -(n as i32)) + 1u32));
            report.upper("i.lower.eta", k, n, &(1u32 - pow2(wp, 1 - n as i32)), &e);
            report.upper("i.upper.eta", k, n, &e, &one);
        }
        if k < 2 {
            report.skip("ii-vi", k, 2);
            continue;
        }
        let e0_odd = eta0((2 * k - 1) as f64, wp)?.value;
        let e_k = eta_even_value(2 * k as u32, wp);
        for j in 1..k {
            let shift = 2 * j as i32 - 2 * k as i32;
            let mut x = ratio(&eta0_even_value((2 * k - 2 * j) as u32, wp), &e0_odd);
            x -= 1;
            report.lower("ii.lower.eta0", k, j, &x);
            report.upper("ii.upper.eta0", k, j, &x, &pow2(wp, shift));
            let y = 1u32 - ratio(&eta_even_value((2 * k - 2 * j) as u32, wp), &e_k);
            let y = Float::with_val(wp, y);
            report.lower("ii.lower.eta", k, j, &y);
            report.upper("ii.upper.eta", k, j, &y, &pow2(wp, 1 + shift));
        }
        for (family, tag) in [(FamilyId::Q, "eta0"), (FamilyId::W, "eta")] {
            let s = sequences(family, k, wp)?;
            for j in 1..k {
                let bound = pow2(wp, 1 + 2 * j as i32 - 2 * k as i32);
                report.lower(&format!("iii.lower.{tag}"), k, j, &s.delta[j]);
                report.upper(&format!("iii.upper.{tag}"), k, j, &s.delta[j], &bound);
            }
            symmetry_row(&mut report, &format!("iv.symmetry.{tag}"), &s, wp);
            let lead = if family == FamilyId::Q { 2 } else { 4 };
            for j in 1..k {
                let lhs = abs_diff(&s.q[j - 1], &s.q[j]);
                let mut rhs = pow2(wp, lead - 2 * j as i32);
                rhs += pow2(wp, 2 - 2 * k as i32 + 2 * j as i32);
                report.upper(&format!("iv.{tag}"), k, j, &lhs, &rhs);
            }
            for r in 1..k {
                let lhs = diff_sum(&s.delta, 1, r, wp);
                let rhs = Float::with_val(wp, pow4(wp, r as i64 + 1 - k as i64) * 2u32) / 3u32;
                report.upper(&format!("v.{tag}"), k, r, &lhs, &rhs);
            }
            for r in 1..=k / 2 {
                let lhs = diff_sum(&s.q, r + 1, k / 2, wp);
                let (scale, tail) = if family == FamilyId::Q {
                    (4u32, pow2(wp, 2 - k as i32))
                } else {
                    (16u32, pow2(wp, -(k as i32)))
                };
                let mut rhs = pow4(wp, -(r as i64));
                rhs += tail;
                rhs *= scale;
                rhs /= 3u32;
                report.upper(&format!("vi.{tag}"), k, r, &lhs, &rhs);
            }
        }
    }
    Ok(report)
}

/// Certified `max |e_r|` on the unit circle against the family's standard
/// bound, for every `k` in range at or above the family's threshold.
///
/// Sample counts double from `samples` while the certified bound exceeds
/// the target but the sampled maximum does not.
pub fn error_bound_scan(
    family: FamilyId,
    k_range: RangeInclusive<usize>,
    samples: usize,
    prec: u32,
) -> Result<ScanReport> {
    let mut report = ScanReport::default();
    let (Some((r, _, k_min)), Some(bound)) = (family.certificate_defaults(), family.error_bound()) else {
        report.notes.push(format!("family {family} has no error polynomial bound"));
        return Ok(report);
    };
    let part = format!("e_{r}.max.{family}");
    for k in k_range {
        if k < k_min {
            report.skip(&part, k, k_min);
            continue;
        }
        let e = e_r_of(family, k, r, prec)?;
        let mut n = samples;
        let mut b = certified_max_on_circle(&e, n)?;
        while b.certified_bound > bound && b.sampled_extremum <= bound && n < MAX_SAMPLES {
            n *= 2;
            b = certified_max_on_circle(&e, n)?;
        }
        let lhs = Float::with_val(64, b.certified_bound);
        report.upper(&part, k, r, &lhs, &Float::with_val(64, bound));
    }
    Ok(report)
}

/// [`error_bound_scan`] for family P (`|e_4| <= 0.019` for `k >= 11`).
pub fn lemma6_scan(k_range: RangeInclusive<usize>, samples: usize, prec: u32) -> Result<ScanReport> {
    error_bound_scan(FamilyId::P, k_range, samples, prec)
}
