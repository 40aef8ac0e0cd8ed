use std::time::Instant;

use super::{
    finish, length_ratio, point_window_share, precheck, solve_family, solve_modular, with_zero_branch, Bound,
    SolveReport, SolverContext,
};
use crate::decomposition::{five_split, half_pieces, length_bands, RestrictedFamily};
use crate::error::{Error, Result};
use crate::instance::{restrict, TimeWindow, TwInstance};
use crate::rational::{ceil_log2, frac, int};

fn require_free(x: &TwInstance) -> Result<()> {
    if x.is_free() {
        Ok(())
    } else {
        Err(Error::Precondition("free-endpoint algorithms need an instance without start or end anchors".into()))
    }
}

/// Five half-unit versions for free instances with length ratio at most two.
/// The middle pieces come from the five-way split. The first and last pieces
/// are replaced by their neighbours on the half grid: `W1` holds the half
/// unit right after the first piece and `W5` the half unit right before the
/// last one. A walk delayed (or advanced) by one half collects in `W1`
/// (`W5`) everything the original collected in its first (last) pieces, and
/// a free walk may start late or early, so only the budget limits the shift.
pub fn solve_free_l_le_2(x: &TwInstance, ctx: &SolverContext) -> Result<SolveReport> {
    let started = Instant::now();
    precheck(x)?;
    require_free(x)?;
    let split = five_split(x)?;
    let base = &split.base;
    let half = frac(1, 2);
    let shifted = |first: bool| -> Result<TwInstance> {
        let windows: Vec<Option<TimeWindow>> = (0..base.n())
            .map(|v| {
                if !base.is_active(v) {
                    return Some(base.windows[v]);
                }
                let w = base.windows[v];
                let pieces = half_pieces(w.release, w.deadline);
                Some(if first {
                    let h = pieces[0].deadline;
                    TimeWindow::of(h, h + half)
                } else {
                    let l = pieces[pieces.len() - 1].release;
                    TimeWindow::of(l - half, l)
                })
            })
            .collect();
        restrict(base, &windows)
    };
    let mut versions = Vec::new();
    if !base.active().is_empty() {
        versions.push(("W1".to_string(), shifted(true)?));
    }
    for (label, v) in &split.versions {
        if matches!(label.as_str(), "B2" | "B3" | "B4") {
            versions.push((label.clone(), v.clone()));
        }
    }
    if !base.active().is_empty() {
        versions.push(("W5".to_string(), shifted(false)?));
    }
    let family = RestrictedFamily { base: split.base.clone(), scale: split.scale, versions };
    let cands = solve_family(x, &family, |_, v| Ok((solve_modular(v, ctx)?, Vec::new())))?;
    let cands = with_zero_branch(x, cands)?;
    let (alpha, proven) = ctx.alpha();
    let bound = Bound { beta: family.beta(), alpha, ratio: int(5) * alpha, proven, asymptotic: "O(1)".into() };
    let bound = point_window_share(x, bound);
    Ok(finish("free-l2", cands, bound, started))
}

/// Free instances with arbitrary lengths: geometric length bands, each with
/// ratio below two, solved by [`solve_free_l_le_2`].
pub fn solve_free_general(x: &TwInstance, ctx: &SolverContext) -> Result<SolveReport> {
    let started = Instant::now();
    precheck(x)?;
    require_free(x)?;
    let family = length_bands(x)?;
    let cands = solve_family(x, &family, |_, v| {
        let r = solve_free_l_le_2(v, ctx)?;
        Ok((r.walk, r.versions))
    })?;
    let cands = with_zero_branch(x, cands)?;
    let (alpha, proven) = ctx.alpha();
    let bands = int(i128::from(ceil_log2(&length_ratio(x))) + 1);
    let bound = Bound { beta: family.beta(), alpha, ratio: int(5) * bands * alpha, proven, asymptotic: "O(log L)".into() };
    let bound = point_window_share(x, bound);
    Ok(finish("free-general", cands, bound, started))
}
