//! Pearson, Spearman and Kendall correlation.
//!
//! Covariances and deviations use the population (divide by `s`)
//! convention. Spearman ranks ties by their average position. Kendall is
//! tau-a: `(s_c - s_d) / (s(s-1)/2)`, with tied pairs counted as neither
//! concordant nor discordant. A constant input makes every coefficient
//! undefined ([`Error::Degenerate`]), never 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients for one pair of samples; `None` means undefined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub r: Option<f64>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub concordant: u64,
    pub discordant: u64,
    pub degenerate: bool,
}

fn check(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "correlation needs at least 2 samples, got {}",
            a.len()
        )));
    }
    if let Some(x) = a.iter().chain(b).find(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite sample {x}")));
    }
    Ok(())
}

fn is_constant(a: &[f64]) -> bool {
    a.iter().all(|&x| x == a[0])
}

fn mean(a: &[f64]) -> f64 {
    a.iter().sum::<f64>() / a.len() as f64
}

pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    check(a, b)?;
    if is_constant(a) || is_constant(b) {
        return Err(Error::Degenerate);
    }
    let (ma, mb) = (mean(a), mean(b));
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    // the 1/s factors cancel between covariance and deviations
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::Degenerate);
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Ascending 1-based ranks; ties share the mean of the ranks they span.
pub fn rank_with_ties(a: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..a.len()).collect();
    idx.sort_by(|&i, &j| a[i].total_cmp(&a[j]));
    let mut ranks = vec![0.0; a.len()];
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && a[idx[end]] == a[idx[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &idx[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    check(a, b)?;
    pearson(&rank_with_ties(a), &rank_with_ties(b))
}

/// Concordant and discordant pair counts in O(s log s).
///
/// Sorts by `(a, b)`, then counts inversions of `b` with a merge sort.
/// Pairs tied in `a`, in `b`, or in both are subtracted out explicitly.
pub fn concordance(a: &[f64], b: &[f64]) -> Result<(u64, u64)> {
    check(a, b)?;
    let s = a.len();
    let mut idx: Vec<usize> = (0..s).collect();
    idx.sort_by(|&i, &j| a[i].total_cmp(&a[j]).then(b[i].total_cmp(&b[j])));

    let total = (s * (s - 1) / 2) as u64;
    let mut tied_a = 0u64;
    let mut tied_both = 0u64;
    let mut i = 0;
    while i < s {
        let mut j = i + 1;
        while j < s && a[idx[j]] == a[idx[i]] {
            j += 1;
        }
        tied_a += pairs(j - i);
        let mut k = i;
        while k < j {
            let mut l = k + 1;
            while l < j && b[idx[l]] == b[idx[k]] {
                l += 1;
            }
            tied_both += pairs(l - k);
            k = l;
        }
        i = j;
    }

    let mut ys: Vec<f64> = idx.iter().map(|&i| b[i]).collect();
    let mut buf = vec![0.0; s];
    let discordant = merge_count(&mut ys, &mut buf);

    let mut tied_b = 0u64;
    let mut i = 0;
    while i < s {
        let mut j = i + 1;
        while j < s && ys[j] == ys[i] {
            j += 1;
        }
        tied_b += pairs(j - i);
        i = j;
    }

    let concordant = total + tied_both - tied_a - tied_b - discordant;
    Ok((concordant, discordant))
}

fn pairs(c: usize) -> u64 {
    (c as u64) * (c as u64).saturating_sub(1) / 2
}

/// Sorts `v` ascending and returns the number of strict inversions.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let len = v.len();
    if len < 2 {
        return 0;
    }
    let mid = len / 2;
    let mut swaps = {
        let (lo, hi) = v.split_at_mut(mid);
        let (blo, bhi) = buf.split_at_mut(mid);
        merge_count(lo, blo) + merge_count(hi, bhi)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < len {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + len - j].copy_from_slice(&v[j..len]);
    v.copy_from_slice(&buf[..len]);
    swaps
}

pub fn kendall(a: &[f64], b: &[f64]) -> Result<f64> {
    check(a, b)?;
    if is_constant(a) || is_constant(b) {
        return Err(Error::Degenerate);
    }
    let (c, d) = concordance(a, b)?;
    let s = a.len() as f64;
    Ok((c as f64 - d as f64) / (0.5 * s * (s - 1.0)))
}

/// All three coefficients. Constant inputs mark the result degenerate with
/// every coefficient `None`.
pub fn correlate(a: &[f64], b: &[f64]) -> Result<CorrelationResult> {
    check(a, b)?;
    let (concordant, discordant) = concordance(a, b)?;
    let defined = |res: Result<f64>| match res {
        Ok(x) => Ok(Some(x)),
        Err(Error::Degenerate) => Ok(None),
        Err(e) => Err(e),
    };
    let r = defined(pearson(a, b))?;
    Ok(CorrelationResult {
        r,
        rho: defined(spearman(a, b))?,
        tau: defined(kendall(a, b))?,
        concordant,
        discordant,
        degenerate: r.is_none(),
    })
}

/// Which coefficient a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficient {
    Pearson,
    Spearman,
    Kendall,
}

impl Coefficient {
    pub const ALL: [Coefficient; 3] = [
        Coefficient::Pearson,
        Coefficient::Spearman,
        Coefficient::Kendall,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coefficient::Pearson => "pearson",
            Coefficient::Spearman => "spearman",
            Coefficient::Kendall => "kendall",
        }
    }

    pub fn pick(self, res: &CorrelationResult) -> Option<f64> {
        match self {
            Coefficient::Pearson => res.r,
            Coefficient::Spearman => res.rho,
            Coefficient::Kendall => res.tau,
        }
    }
}
