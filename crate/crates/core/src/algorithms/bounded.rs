use std::time::Instant;

use num_traits::One;

use super::{
    finish, length_ratio, point_window_share, lift_claims, precheck, solve_family, solve_modular, with_zero_branch, Bound, SolveReport,
    SolverContext,
};
use crate::decomposition::{dyadic_family, three_split_ceil, three_split_floor};
use crate::error::{Error, Result};
use crate::instance::{window_stats, TwInstance, WalkSolution};
use crate::modular::solve_deadline_groups;
use crate::rational::{ceil_log2, int, Rational};

fn log_factor(l: &Rational) -> Rational {
    int(i128::from(ceil_log2(l)))
}

/// Integer window endpoints: each dyadic version is modular and solved by
/// the composition DP; the best version wins.
pub fn solve_integer_endpoints(x: &TwInstance, ctx: &SolverContext) -> Result<SolveReport> {
    let started = Instant::now();
    precheck(x)?;
    if !x.has_integer_windows() {
        return Err(Error::Precondition("window endpoints must be integers; use the general algorithm".into()));
    }
    let family = dyadic_family(x)?;
    let cands = solve_family(x, &family, |_, v| Ok((solve_modular(v, ctx)?, Vec::new())))?;
    let cands = with_zero_branch(x, cands)?;
    let (alpha, proven) = ctx.alpha();
    let l_max = window_stats(&family.base).l_max.unwrap_or_else(Rational::one);
    let factor = if l_max <= Rational::one() { int(1) } else { int(2) * log_factor(&l_max) };
    let bound = Bound { beta: family.beta(), alpha, ratio: factor * alpha, proven, asymptotic: "O(log L_max)".into() };
    let bound = point_window_share(x, bound);
    Ok(finish("integer-endpoints", cands, bound, started))
}

/// Reverses a walk found on the time-reversed instance.
fn unreverse(x: &TwInstance, sol: &WalkSolution) -> Result<WalkSolution> {
    let mut claims: Vec<usize> =
        sol.schedule.iter().filter(|v| v.collect && sol.collected.contains(&v.vertex)).map(|v| v.vertex).collect();
    claims.reverse();
    lift_claims(x, &claims)
}

/// Length ratio at most two: B2 windows are aligned unit intervals and form
/// a modular instance; B3 windows share a release per integer and are solved
/// as consecutive deadline problems; B1 windows share a deadline per integer
/// and are solved the same way after reversing time.
pub fn solve_l_le_2(x: &TwInstance, ctx: &SolverContext) -> Result<SolveReport> {
    let started = Instant::now();
    precheck(x)?;
    let family = three_split_floor(x)?;
    let cands = solve_family(x, &family, |label, v| {
        let sol = match label {
            "B2" => solve_modular(v, ctx)?,
            "B3" => solve_deadline_groups(v, ctx.deadline.as_ref())?,
            _ => {
                let r = v.reversed();
                unreverse(v, &solve_deadline_groups(&r, ctx.deadline.as_ref())?)?
            }
        };
        Ok((sol, Vec::new()))
    })?;
    let cands = with_zero_branch(x, cands)?;
    let (alpha, proven) = ctx.alpha();
    let bound = Bound { beta: family.beta(), alpha, ratio: int(3) * alpha, proven, asymptotic: "O(1)".into() };
    let bound = point_window_share(x, bound);
    Ok(finish("l2", cands, bound, started))
}

/// Arbitrary positive window lengths: after scaling to unit minimum length,
/// B1 and B3 have lengths in `[1, 2]` and go to [`solve_l_le_2`], B2 has
/// integer endpoints and goes to [`solve_integer_endpoints`].
pub fn solve_general(x: &TwInstance, ctx: &SolverContext) -> Result<SolveReport> {
    let started = Instant::now();
    precheck(x)?;
    let family = three_split_ceil(x)?;
    let cands = solve_family(x, &family, |label, v| {
        let r = if label == "B2" { solve_integer_endpoints(v, ctx)? } else { solve_l_le_2(v, ctx)? };
        Ok((r.walk, r.versions))
    })?;
    let cands = with_zero_branch(x, cands)?;
    let (alpha, proven) = ctx.alpha();
    let l = length_ratio(x);
    let factor = int(3) * (int(2) * log_factor(&l)).max(int(1));
    let bound =
        Bound { beta: family.beta(), alpha, ratio: factor * alpha, proven, asymptotic: "O(max(log n, log L))".into() };
    let bound = point_window_share(x, bound);
    Ok(finish("general", cands, bound, started))
}
