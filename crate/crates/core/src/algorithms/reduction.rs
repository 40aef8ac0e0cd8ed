use num_traits::Zero;

use crate::error::{Error, Result};
use crate::instance::{TimeWindow, TwInstance};
use crate::rational::Rational;

/// Turns a deadline-only instance into one with length ratio at most two: a
/// new start vertex `s'` hangs off `s` by an edge of length `D_max`, every
/// window `[0, D]` becomes `[0, D + D_max]` and the budget grows by `D_max`.
/// The new start is the last vertex. An end anchor is kept as is.
pub fn reduce_deadline_to_tw(x: &TwInstance) -> Result<TwInstance> {
    x.validate()?;
    let Some(s) = x.start else {
        return Err(Error::Precondition("a deadline instance needs a start vertex".into()));
    };
    if let Some(v) = x.active().into_iter().find(|&v| !x.windows[v].release.is_zero()) {
        return Err(Error::Precondition(format!("vertex {v} has a nonzero release time")));
    }
    let d_max = x.active().iter().map(|&v| x.windows[v].deadline).max().unwrap_or_else(Rational::zero);
    let mut windows: Vec<TimeWindow> =
        x.windows.iter().map(|w| TimeWindow::of(Rational::zero(), w.deadline + d_max)).collect();
    windows.push(TimeWindow::of(Rational::zero(), x.budget + d_max));
    let mut rewards = x.rewards.clone();
    rewards.push(Rational::zero());
    TwInstance::new(x.metric.with_pendant(s, d_max), windows, rewards, Some(x.n()), x.end, x.budget + d_max, x.wait)
}
