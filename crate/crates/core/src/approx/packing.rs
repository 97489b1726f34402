//! Strip packing of one vehicle's fractional assignments.
//!
//! Each `(station, time)` with value `x` becomes a rectangle of width
//! `[t, t + C + 1)` and total height `x` inside the strip
//! `[1, T + 1] x [0, 1]`. Rectangles may be cut into horizontal slices but
//! never split along the time axis. A horizontal line through the strip
//! then crosses only slices with disjoint time spans, i.e. a set of
//! discharges that respects the recharge window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Heights below this are treated as zero.
const HEIGHT_EPS: f64 = 1e-12;
/// Allowed excess of a time window over the unit strip.
const OVERFLOW_TOL: f64 = 1e-6;

/// One horizontal piece of a rectangle: `[x_start, x_end) x [lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub station: usize,
    pub time: usize,
    pub x_start: usize,
    pub x_end: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Slice {
    pub fn height(&self) -> f64 {
        self.hi - self.lo
    }

    fn overlaps_span(&self, start: usize, end: usize) -> bool {
        self.x_start < end && start < self.x_end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Packing {
    pub charge_time: usize,
    pub horizon: usize,
    pub slices: Vec<Slice>,
}

impl Packing {
    /// Total slice height placed for `(station, time)`.
    pub fn placed(&self, station: usize, time: usize) -> f64 {
        self.slices
            .iter()
            .filter(|s| s.station == station && s.time == time)
            .map(Slice::height)
            .sum()
    }

    /// Sorted y-coordinates where the set crossed by a horizontal line changes.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut ys: Vec<f64> = self.slices.iter().flat_map(|s| [s.lo, s.hi]).collect();
        ys.push(0.0);
        ys.push(1.0);
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        ys
    }
}

/// Free y-intervals of `[0, 1)` not covered by `occupied`.
fn free_gaps(mut occupied: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    occupied.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut gaps = Vec::new();
    let mut cursor = 0.0;
    for (lo, hi) in occupied {
        if lo > cursor + HEIGHT_EPS {
            gaps.push((cursor, lo));
        }
        cursor = f64::max(cursor, hi);
    }
    if cursor < 1.0 - HEIGHT_EPS {
        gaps.push((cursor, 1.0));
    }
    gaps
}

/// Lays out `(station, time, x)` values for a vehicle with charge time
/// `charge_time`.
///
/// Pairs are processed by non-decreasing time, then station. A pair gets a
/// single slice in the lowest free gap tall enough for it; otherwise it is
/// cut into slices filling free gaps bottom-up.
pub fn pack_rectangles(
    values: &[(usize, usize, f64)],
    charge_time: usize,
    horizon: usize,
) -> Result<Packing> {
    let mut items: Vec<(usize, usize, f64)> = values
        .iter()
        .copied()
        .filter(|&(_, _, x)| x > HEIGHT_EPS)
        .collect();
    items.sort_by_key(|&(j, t, _)| (t, j));

    let mut slices: Vec<Slice> = Vec::new();
    for (station, time, x) in items {
        let (start, end) = (time, time + charge_time + 1);
        let occupied: Vec<(f64, f64)> = slices
            .iter()
            .filter(|s| s.overlaps_span(start, end))
            .map(|s| (s.lo, s.hi))
            .collect();
        let gaps = free_gaps(occupied);
        let slice = |lo: f64, hi: f64| Slice {
            station,
            time,
            x_start: start,
            x_end: end,
            lo,
            hi,
        };

        if let Some(&(lo, hi)) = gaps.iter().find(|(lo, hi)| hi - lo >= x - HEIGHT_EPS) {
            slices.push(slice(lo, f64::min(lo + x, hi)));
            continue;
        }
        let free: f64 = gaps.iter().map(|(lo, hi)| hi - lo).sum();
        if free < x - OVERFLOW_TOL {
            return Err(Error::Packing {
                start,
                end,
                needed: x,
                free,
            });
        }
        let mut remaining = x;
        for (lo, hi) in gaps {
            if remaining <= HEIGHT_EPS {
                break;
            }
            let h = f64::min(hi - lo, remaining);
            slices.push(slice(lo, lo + h));
            remaining -= h;
        }
    }
    Ok(Packing {
        charge_time,
        horizon,
        slices,
    })
}

/// `(station, time)` origins of every slice crossed by the line at height
/// `y`, sorted by time.
pub fn sample_line(pack: &Packing, y: f64) -> Vec<(usize, usize)> {
    let mut hits: Vec<(usize, usize)> = pack
        .slices
        .iter()
        .filter(|s| s.lo <= y && y < s.hi)
        .map(|s| (s.station, s.time))
        .collect();
    hits.sort_by_key(|&(j, t)| (t, j));
    hits
}
