//! Restricted-version constructions.
//!
//! Each construction cuts every window into pieces and distributes the
//! pieces over a small number of restricted versions whose windows together
//! cover the original ones. The best version then retains at least a
//! `1/beta` share of the optimum.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::instance::{restrict, scale_times, window_stats, TimeWindow, TwInstance};
use crate::rational::{ceil_int, floor_int, floor_log2, format_rational, frac, int, Rational};

/// Aligned interval `[lo, hi]` with `hi - lo = 2^level` and `lo` a multiple
/// of `2^level`. `slot` is 1 for the leftmost piece of its length and 2 for
/// the second one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DyadicPiece {
    pub lo: i128,
    pub hi: i128,
    pub level: u32,
    pub slot: u8,
}

/// Splits `[lo, hi]` into aligned power-of-two pieces: peel a unit piece off
/// each odd endpoint, halve, repeat.
pub fn dyadic_partition(lo: i128, hi: i128) -> Result<Vec<DyadicPiece>> {
    if lo >= hi {
        return Err(Error::Argument(format!("empty interval [{lo}, {hi}]")));
    }
    let mut pieces = Vec::new();
    let (mut a, mut b, mut level) = (lo, hi, 0u32);
    while a < b {
        let unit = 1i128 << level;
        if a.rem_euclid(2) == 1 {
            pieces.push((a * unit, (a + 1) * unit, level));
            a += 1;
        }
        if b.rem_euclid(2) == 1 && b > a {
            pieces.push(((b - 1) * unit, b * unit, level));
            b -= 1;
        }
        a = a.div_euclid(2);
        b = b.div_euclid(2);
        level += 1;
    }
    pieces.sort();
    let mut seen: BTreeMap<u32, u8> = BTreeMap::new();
    Ok(pieces
        .into_iter()
        .map(|(lo, hi, level)| {
            let slot = seen.entry(level).or_insert(0);
            *slot += 1;
            DyadicPiece { lo, hi, level, slot: *slot }
        })
        .collect())
}

/// A base instance together with restricted versions of it.
#[derive(Debug, Clone)]
pub struct RestrictedFamily {
    /// The instance the versions restrict: zero-length windows removed and
    /// times multiplied by `scale`.
    pub base: TwInstance,
    pub scale: Rational,
    pub versions: Vec<(String, TwInstance)>,
}

impl RestrictedFamily {
    pub fn beta(&self) -> usize {
        self.versions.len()
    }

    pub fn version(&self, label: &str) -> Option<&TwInstance> {
        self.versions.iter().find(|(l, _)| l == label).map(|(_, x)| x)
    }

    /// Checks that every version restricts `base` and that, for each
    /// positive-reward vertex, the version windows union to its base window.
    pub fn verify(&self) -> Result<()> {
        for v in self.base.active() {
            let mut parts: Vec<TimeWindow> = Vec::new();
            for (_, b) in &self.versions {
                if b.is_active(v) {
                    if !b.windows[v].within(&self.base.windows[v]) {
                        return Err(Error::Containment { vertex: v });
                    }
                    parts.push(b.windows[v]);
                }
            }
            if !covers(&self.base.windows[v], parts) {
                return Err(Error::Precondition(format!(
                    "version windows of vertex {v} do not cover {}",
                    self.base.windows[v]
                )));
            }
        }
        for (label, b) in &self.versions {
            for v in b.active() {
                if !self.base.is_active(v) || !b.windows[v].within(&self.base.windows[v]) {
                    return Err(Error::Precondition(format!("version {label} is not a restriction at vertex {v}")));
                }
            }
        }
        Ok(())
    }
}

fn covers(target: &TimeWindow, mut parts: Vec<TimeWindow>) -> bool {
    parts.sort();
    let mut reach: Option<Rational> = None;
    for p in parts {
        match reach {
            None if p.release != target.release => return false,
            Some(r) if p.release > r => return false,
            _ => {}
        }
        reach = Some(reach.map_or(p.deadline, |r| r.max(p.deadline)));
    }
    reach == Some(target.deadline)
}

/// Drops zero-length windows and rescales so the shortest window has length
/// one. Returns the prepared instance and the factor applied.
fn normalize(x: &TwInstance, max_ratio: Option<i128>) -> Result<(TwInstance, Rational)> {
    let (positive, _) = x.split_zero_windows();
    let stats = window_stats(&positive);
    if let (Some(limit), Some(ratio)) = (max_ratio, stats.l_ratio) {
        if ratio > int(limit) {
            return Err(Error::Precondition(format!(
                "window length ratio {} exceeds {limit}",
                format_rational(&ratio)
            )));
        }
    }
    let scale = match stats.l_min {
        Some(l) => Rational::one() / l,
        None => Rational::one(),
    };
    Ok((scale_times(&positive, &scale)?, scale))
}

/// Builds one version per label from per-vertex piece assignments.
fn build(
    base: TwInstance,
    scale: Rational,
    assignments: Vec<(usize, String, TimeWindow)>,
    label_order: impl Fn(&str) -> (u32, u32),
) -> Result<RestrictedFamily> {
    let mut by_label: BTreeMap<(u32, u32, String), Vec<Option<TimeWindow>>> = BTreeMap::new();
    let inactive: Vec<Option<TimeWindow>> = (0..base.n())
        .map(|v| if base.is_active(v) { None } else { Some(base.windows[v]) })
        .collect();
    for (v, label, w) in assignments {
        let (k1, k2) = label_order(&label);
        by_label.entry((k1, k2, label)).or_insert_with(|| inactive.clone())[v] = Some(w);
    }
    let mut versions = Vec::with_capacity(by_label.len());
    for ((_, _, label), windows) in by_label {
        versions.push((label, restrict(&base, &windows)?));
    }
    Ok(RestrictedFamily { base, scale, versions })
}

fn numbered(prefix: &'static str) -> impl Fn(&str) -> (u32, u32) {
    move |l: &str| (l.trim_start_matches(prefix).parse().unwrap_or(0), 0)
}

/// Dyadic family: vertex `v` joins version `B{slot}_{level}` with the
/// matching piece of its window. Windows inside a version are identical or
/// disjoint apart from shared endpoints, so every version is modular.
pub fn dyadic_family(x: &TwInstance) -> Result<RestrictedFamily> {
    let (base, _) = x.split_zero_windows();
    let mut assignments = Vec::new();
    for v in base.active() {
        let w = base.windows[v];
        if !w.has_integer_endpoints() {
            return Err(Error::Precondition(format!("vertex {v} has a non-integer window {w}")));
        }
        for p in dyadic_partition(w.release.to_integer(), w.deadline.to_integer())? {
            assignments.push((v, format!("B{}_{}", p.slot, p.level), TimeWindow::of(int(p.lo), int(p.hi))));
        }
    }
    build(base, Rational::one(), assignments, |l| {
        let (slot, level) = l[1..].split_once('_').expect("dyadic label");
        (slot.parse().unwrap(), level.parse().unwrap())
    })
}

/// Three-way split for length ratio at most two: `a` is the least integer
/// above the release, `b` the greatest integer below the deadline. B1 gets
/// `[R, a]`, B2 the unit-aligned middle `[a, b]`, B3 `[b, D]`. When `a > b`
/// the whole window goes to B1.
pub fn three_split_floor(x: &TwInstance) -> Result<RestrictedFamily> {
    let (base, scale) = normalize(x, Some(2))?;
    let mut assignments = Vec::new();
    for v in base.active() {
        let TimeWindow { release: r, deadline: d } = base.windows[v];
        let a = int(floor_int(&r) + 1);
        let b = int(ceil_int(&d) - 1);
        if a > b {
            assignments.push((v, "B1".to_string(), TimeWindow::of(r, d)));
            continue;
        }
        assignments.push((v, "B1".to_string(), TimeWindow::of(r, a)));
        if a < b {
            assignments.push((v, "B2".to_string(), TimeWindow::of(a, b)));
        }
        assignments.push((v, "B3".to_string(), TimeWindow::of(b, d)));
    }
    build(base, scale, assignments, numbered("B"))
}

/// Three-way split for arbitrary lengths: `a = ceil(R + 1)`, `b = floor(D - 1)`.
/// B1 gets `[R, min(a, D)]`, B3 `[max(b, R), D]` and, when `a < b`, B2 the
/// integer window `[a, b]`. B1 and B3 windows have length in `[1, 2]`.
pub fn three_split_ceil(x: &TwInstance) -> Result<RestrictedFamily> {
    let (base, scale) = normalize(x, None)?;
    let mut assignments = Vec::new();
    for v in base.active() {
        let TimeWindow { release: r, deadline: d } = base.windows[v];
        let a = int(ceil_int(&(r + 1)));
        let b = int(floor_int(&(d - 1)));
        assignments.push((v, "B1".to_string(), TimeWindow::of(r, a.min(d))));
        if a < b {
            assignments.push((v, "B2".to_string(), TimeWindow::of(a, b)));
        }
        assignments.push((v, "B3".to_string(), TimeWindow::of(b.max(r), d)));
    }
    build(base, scale, assignments, numbered("B"))
}

/// Cuts `[r, d]` at every interior multiple of one half.
pub fn half_pieces(r: Rational, d: Rational) -> Vec<TimeWindow> {
    let half = frac(1, 2);
    let mut cuts = vec![r];
    let mut k = floor_int(&(r * int(2))) + 1;
    while frac(k, 2) < d {
        cuts.push(frac(k, 2));
        k += 1;
    }
    cuts.push(d);
    debug_assert!(cuts.windows(2).all(|c| c[1] - c[0] <= half));
    cuts.windows(2).map(|c| TimeWindow::of(c[0], c[1])).collect()
}

/// Five-way split for length ratio at most two. B1 takes the first
/// half-unit piece of each window, B5 the last, B2..B4 the middle pieces in
/// order.
pub fn five_split(x: &TwInstance) -> Result<RestrictedFamily> {
    let (base, scale) = normalize(x, Some(2))?;
    let mut assignments = Vec::new();
    for v in base.active() {
        let w = base.windows[v];
        let pieces = half_pieces(w.release, w.deadline);
        let last = pieces.len() - 1;
        for (i, p) in pieces.into_iter().enumerate() {
            let k = if i == 0 {
                1
            } else if i == last {
                5
            } else {
                i + 1
            };
            assignments.push((v, format!("B{k}"), p));
        }
    }
    build(base, scale, assignments, numbered("B"))
}

/// Geometric length bands: vertex `v` joins `band_j` with its full window,
/// where `2^j <= L(v) / L_min < 2^(j+1)`. Each band has length ratio below two.
pub fn length_bands(x: &TwInstance) -> Result<RestrictedFamily> {
    let (base, _) = x.split_zero_windows();
    let l_min = window_stats(&base).l_min.unwrap_or(Rational::one());
    let assignments = base
        .active()
        .into_iter()
        .map(|v| {
            let j = floor_log2(&(base.windows[v].length() / l_min));
            (v, format!("band_{j}"), base.windows[v])
        })
        .collect();
    build(base, Rational::one(), assignments, numbered("band_"))
}

/// Multiplies the times of every version by the same factor.
pub fn rescaled(family: &RestrictedFamily, c: &Rational) -> Result<RestrictedFamily> {
    if c.is_zero() {
        return Err(Error::Argument("zero scale".into()));
    }
    Ok(RestrictedFamily {
        base: scale_times(&family.base, c)?,
        scale: family.scale * c,
        versions: family
            .versions
            .iter()
            .map(|(l, v)| Ok((l.clone(), scale_times(v, c)?)))
            .collect::<Result<_>>()?,
    })
}
