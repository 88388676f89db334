use crate::error::{Error, Result};
use crate::point::Point;

/// One iteration of a splitting method started at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub n: usize,
    /// `T^n x`
    pub governing: Point,
    /// `P_U T^n x`
    pub shadow: Point,
    /// The prox evaluation made while computing `T^{n+1} x`.
    pub prox_point: Point,
    /// `d_n = T^n x − T^{n+1} x`
    pub diff: Point,
    pub g_value: f64,
    /// `(n + 1)⟨d_n − v̂, v̂⟩`; NaN until a gap estimate is attached.
    pub kuchen_diag: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    entries: Vec<TraceEntry>,
}

impl IterationTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: TraceEntry) {
        self.entries.push(entry);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn get(&self, n: usize) -> Option<&TraceEntry> {
        self.entries.get(n)
    }

    pub fn last(&self) -> Option<&TraceEntry> {
        self.entries.last()
    }

    /// The governing point after the last recorded step, `T^{len} x`.
    pub fn final_point(&self) -> Option<Point> {
        self.last().map(|e| &e.governing - &e.diff)
    }

    pub fn tail(&self, window: usize) -> &[TraceEntry] {
        &self.entries[self.entries.len().saturating_sub(window)..]
    }

    /// Keeps every `stride`-th entry plus the last one.
    pub fn downsampled(&self, stride: usize) -> IterationTrace {
        let stride = stride.max(1);
        let last = self.entries.len().saturating_sub(1);
        IterationTrace {
            entries: self
                .entries
                .iter()
                .filter(|e| e.n % stride == 0 || e.n == last)
                .cloned()
                .collect(),
        }
    }

    /// Fills the `kuchen_diag` column against a displacement estimate.
    pub fn attach_gap(&mut self, v: &Point) {
        for e in &mut self.entries {
            e.kuchen_diag = (e.n + 1) as f64 * (&e.diff - v).dot(v);
        }
    }
}

/// Tail mean of the differences `d_n`, estimating the minimal displacement
/// vector of the operator that produced the trace.
pub fn estimate_gap_vector(trace: &IterationTrace, tail_window: usize) -> Result<Point> {
    if tail_window == 0 || trace.len() < tail_window {
        return Err(Error::InsufficientTrace {
            len: trace.len(),
            needed: tail_window.max(1),
        });
    }
    Ok(Point::mean(trace.tail(tail_window).iter().map(|e| &e.diff)).expect("nonempty tail"))
}

/// Summary statistics over the last `window` entries.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TailStats {
    pub mean_diff: Point,
    /// `max ‖d_n − mean‖`
    pub diff_spread: f64,
    /// `max ‖shadow_{n+1} − shadow_n‖`
    pub max_shadow_step: f64,
    /// Least-squares slope of `‖shadow_n‖` against `n`.
    pub shadow_norm_slope: f64,
    pub mean_shadow: Point,
    pub mean_g_value: f64,
}

pub(crate) fn tail_stats(trace: &IterationTrace, window: usize) -> Option<TailStats> {
    if window == 0 || trace.len() < window {
        return None;
    }
    let tail = trace.tail(window);
    let mean_diff = Point::mean(tail.iter().map(|e| &e.diff))?;
    let diff_spread = tail.iter().map(|e| e.diff.distance(&mean_diff)).fold(0.0, f64::max);
    let max_shadow_step = tail
        .windows(2)
        .map(|w| w[1].shadow.distance(&w[0].shadow))
        .fold(0.0, f64::max);
    let mean_shadow = Point::mean(tail.iter().map(|e| &e.shadow))?;
    let mean_g_value = tail.iter().map(|e| e.g_value).sum::<f64>() / window as f64;

    let count = window as f64;
    let n_mean = tail.iter().map(|e| e.n as f64).sum::<f64>() / count;
    let norms: Vec<f64> = tail.iter().map(|e| e.shadow.norm()).collect();
    let norm_mean = norms.iter().sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (e, r) in tail.iter().zip(&norms) {
        let dx = e.n as f64 - n_mean;
        sxy += dx * (r - norm_mean);
        sxx += dx * dx;
    }
    let shadow_norm_slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };

    Some(TailStats {
        mean_diff,
        diff_spread,
        max_shadow_step,
        shadow_norm_slope,
        mean_shadow,
        mean_g_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(n: usize, shadow: [f64; 2], diff: [f64; 2]) -> TraceEntry {
        TraceEntry {
            n,
            governing: Point::zeros(2),
            shadow: shadow.into(),
            prox_point: Point::zeros(2),
            diff: diff.into(),
            g_value: n as f64,
            kuchen_diag: f64::NAN,
        }
    }

    #[test]
    fn gap_estimate_is_tail_mean() {
        let mut t = IterationTrace::new();
        for n in 0..4 {
            t.push(entry(n, [0.0, 0.0], [n as f64, -1.0]));
        }
        assert_eq!(estimate_gap_vector(&t, 2).unwrap(), Point::from([2.5, -1.0]));
        assert_eq!(
            estimate_gap_vector(&t, 5),
            Err(Error::InsufficientTrace { len: 4, needed: 5 })
        );
    }

    #[test]
    fn slope_of_linear_drift() {
        let mut t = IterationTrace::new();
        for n in 0..10 {
            t.push(entry(n, [-(n as f64), 0.0], [1.0, 0.0]));
        }
        let s = tail_stats(&t, 5).unwrap();
        assert!((s.shadow_norm_slope - 1.0).abs() < 1e-12);
        assert_eq!(s.max_shadow_step, 1.0);
        assert_eq!(s.diff_spread, 0.0);
    }

    #[test]
    fn downsampling_keeps_last_entry() {
        let mut t = IterationTrace::new();
        for n in 0..10 {
            t.push(entry(n, [0.0, 0.0], [0.0, 0.0]));
        }
        let ns: Vec<usize> = t.downsampled(4).entries().iter().map(|e| e.n).collect();
        assert_eq!(ns, vec![0, 4, 8, 9]);
    }
}
