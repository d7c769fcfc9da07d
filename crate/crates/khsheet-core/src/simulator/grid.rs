use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::Side;

/// Fewest points per side the boundary closures fit into.
pub const MIN_POINTS: usize = 16;

/// Fields stored per node.
pub const FIELDS: usize = 7;

/// Two truncated half-lines of N uniform points each. Lower nodes are
/// x2 = -L + k dx (the interface is the last one), upper nodes x2 = i dx.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub l: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(l: f64, n: usize) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::Domain { what: "L", value: l });
        }
        if n < MIN_POINTS {
            return Err(Error::argument("grid needs at least 16 points per side"));
        }
        Ok(Grid1D { l, n })
    }

    pub fn spacing(&self) -> f64 {
        self.l / (self.n - 1) as f64
    }

    /// Signed x2 of node `i` on `side`.
    pub fn x(&self, side: Side, i: usize) -> f64 {
        match side {
            Side::Upper => i as f64 * self.spacing(),
            Side::Lower => -self.l + i as f64 * self.spacing(),
        }
    }

    /// Node on `side` lying on the interface.
    pub fn interface_node(&self, side: Side) -> usize {
        match side {
            Side::Upper => 0,
            Side::Lower => self.n - 1,
        }
    }

    /// Node on `side` at the truncation boundary.
    pub fn outer_node(&self, side: Side) -> usize {
        match side {
            Side::Upper => self.n - 1,
            Side::Lower => 0,
        }
    }

    /// Length of the stacked unknown vector.
    pub fn unknowns(&self) -> usize {
        2 * FIELDS * self.n + 1
    }

    /// Position of field `f` at node `i` of `side` in the stacked vector.
    pub fn index(&self, side: Side, i: usize, f: usize) -> usize {
        match side {
            Side::Lower => FIELDS * i + f,
            Side::Upper => FIELDS * self.n + 1 + FIELDS * i + f,
        }
    }

    /// Position of the front amplitude.
    pub fn front_index(&self) -> usize {
        FIELDS * self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_a_bijection() {
        let g = Grid1D::new(10.0, 16).unwrap();
        let mut seen = alloc::vec![false; g.unknowns()];
        for side in Side::BOTH {
            for i in 0..g.n {
                for f in 0..FIELDS {
                    let k = g.index(side, i, f);
                    assert!(!seen[k]);
                    seen[k] = true;
                }
            }
        }
        assert!(!seen[g.front_index()]);
        seen[g.front_index()] = true;
        assert!(seen.iter().all(|&s| s));
        assert_eq!(g.x(Side::Lower, g.interface_node(Side::Lower)), 0.0);
        assert_eq!(g.x(Side::Upper, g.outer_node(Side::Upper)), 10.0);
        assert!(Grid1D::new(10.0, 8).is_err());
        assert!(Grid1D::new(-1.0, 32).is_err());
    }
}
