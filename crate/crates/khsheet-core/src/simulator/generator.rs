use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::grid::{Grid1D, FIELDS};
use super::sbp::{derivative_row, norm_weight};
use crate::error::{Error, Result};
use crate::linalg::sparse::CsrMatrix;
use crate::modes::{Field, NormalMode};
use crate::state::{BackgroundState, Side};
use crate::I;

/// Per-side nodal values of the seven fields plus the front amplitude.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub eta: f64,
    pub time: f64,
    /// `upper[f][i]`: field `f` (in `Field::ALL` order) at upper node i.
    pub upper: Vec<Vec<Complex64>>,
    pub lower: Vec<Vec<Complex64>>,
    pub g: Complex64,
}

impl SimState {
    pub fn zeros(grid: &Grid1D, eta: f64) -> Self {
        let side = || vec![vec![Complex64::zero(); grid.n]; FIELDS];
        SimState { eta, time: 0.0, upper: side(), lower: side(), g: Complex64::zero() }
    }

    pub fn side(&self, side: Side) -> &[Vec<Complex64>] {
        match side {
            Side::Upper => &self.upper,
            Side::Lower => &self.lower,
        }
    }

    pub fn side_mut(&mut self, side: Side) -> &mut [Vec<Complex64>] {
        match side {
            Side::Upper => &mut self.upper,
            Side::Lower => &mut self.lower,
        }
    }

    pub fn pack(&self, grid: &Grid1D) -> Vec<Complex64> {
        let mut u = vec![Complex64::zero(); grid.unknowns()];
        for side in Side::BOTH {
            let s = self.side(side);
            for i in 0..grid.n {
                for f in 0..FIELDS {
                    u[grid.index(side, i, f)] = s[f][i];
                }
            }
        }
        u[grid.front_index()] = self.g;
        u
    }

    pub fn unpack(grid: &Grid1D, u: &[Complex64], eta: f64, time: f64) -> Self {
        let mut st = SimState::zeros(grid, eta);
        st.time = time;
        for side in Side::BOTH {
            let s = st.side_mut(side);
            for i in 0..grid.n {
                for f in 0..FIELDS {
                    s[f][i] = u[grid.index(side, i, f)];
                }
            }
        }
        st.g = u[grid.front_index()];
        st
    }

    /// Samples an analytic normal mode at the grid nodes.
    pub fn from_mode(grid: &Grid1D, mode: &NormalMode) -> Self {
        let mut st = SimState::zeros(grid, mode.eta);
        for side in Side::BOTH {
            let prof = *mode.side(side);
            let s = st.side_mut(side);
            for i in 0..grid.n {
                let x = grid.x(side, i);
                for field in Field::ALL {
                    s[field.index()][i] = prof.eval(field, x);
                }
            }
        }
        st.g = mode.g_hat;
        st
    }
}

/// The semi-discrete generator d/dt u = A u at one wavenumber.
#[derive(Clone, Debug)]
pub struct Generator {
    pub matrix: CsrMatrix,
    pub grid: Grid1D,
    pub eta: f64,
    pub state: BackgroundState,
}

/// One characteristic penalty: the incoming variable R = w2 + sigma c h at a
/// boundary node is driven toward a target built from the neighbouring side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Penalty {
    pub side: Side,
    pub node: usize,
    pub sigma: f64,
    /// +1 at a left end, -1 at a right end.
    pub orientation: f64,
    pub interface: bool,
}

pub(crate) fn penalties(grid: &Grid1D) -> [Penalty; 4] {
    let n = grid.n;
    [
        Penalty { side: Side::Lower, node: 0, sigma: 1.0, orientation: 1.0, interface: false },
        Penalty { side: Side::Lower, node: n - 1, sigma: -1.0, orientation: -1.0, interface: true },
        Penalty { side: Side::Upper, node: 0, sigma: 1.0, orientation: 1.0, interface: true },
        Penalty { side: Side::Upper, node: n - 1, sigma: -1.0, orientation: -1.0, interface: false },
    ]
}

/// R - T at a penalty node as (index, coefficient) pairs over the stacked vector.
pub(crate) fn penalty_form(state: &BackgroundState, grid: &Grid1D, eta: f64, p: &Penalty) -> Vec<(usize, Complex64)> {
    let c = state.c;
    let h = Field::H.index();
    let w2 = Field::W2.index();
    let one = Complex64::new(1.0, 0.0);
    let mut out = vec![(grid.index(p.side, p.node, w2), one), (grid.index(p.side, p.node, h), one * (p.sigma * c))];
    if p.interface {
        // T carries the opposite side's outgoing variable and the velocity jump
        let other = match p.side {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        };
        let on = grid.interface_node(other);
        let jump = I * (2.0 * state.v1_plus * eta);
        out.push((grid.index(other, on, w2), -one));
        out.push((grid.index(other, on, h), -one * (p.sigma * c)));
        // upper: T = (w2 + c h)^- + 2 i v eta g ; lower: T = (w2 - c h)^+ - 2 i v eta g
        out.push((grid.front_index(), -jump * p.side.sign()));
    }
    out
}

pub fn assemble_generator(state: &BackgroundState, eta: f64, grid: &Grid1D) -> Result<Generator> {
    state.validate()?;
    if !eta.is_finite() {
        return Err(Error::Domain { what: "eta", value: eta });
    }
    let n = grid.n;
    let dx = grid.spacing();
    let c = state.c;
    let c2 = c * c;
    let ie = I * eta;
    let (h, w1, w2) = (Field::H.index(), Field::W1.index(), Field::W2.index());
    let mut t: Vec<(usize, usize, Complex64)> = Vec::with_capacity(grid.unknowns() * 8);
    let rows: Vec<Vec<(usize, f64)>> = (0..n).map(|i| derivative_row(i, n, dx)).collect();
    for side in Side::BOTH {
        let adv = -I * (state.velocity(side) * eta);
        let gd = state.deformation_row(side);
        let idx = |i: usize, f: usize| grid.index(side, i, f);
        for (i, drow) in rows.iter().enumerate() {
            for f in 0..FIELDS {
                t.push((idx(i, f), idx(i, f), adv));
            }
            t.push((idx(i, h), idx(i, w1), -ie));
            t.push((idx(i, w1), idx(i, h), -ie * c2));
            for &(k, d) in drow {
                t.push((idx(i, h), idx(k, w2), Complex64::new(-d, 0.0)));
                t.push((idx(i, w2), idx(k, h), Complex64::new(-c2 * d, 0.0)));
            }
            for (row, wi) in [(0usize, w1), (1usize, w2)] {
                for (j, &gj) in gd.iter().enumerate() {
                    if gj == 0.0 {
                        continue;
                    }
                    let e = idx(i, Field::deformation(row + 1, j + 1).index());
                    t.push((idx(i, wi), e, ie * gj));
                    t.push((e, idx(i, wi), ie * gj));
                }
            }
        }
    }
    let gi = grid.front_index();
    t.push((gi, grid.index(Side::Upper, 0, w2), Complex64::new(1.0, 0.0)));
    t.push((gi, gi, -I * (state.v1_plus * eta)));
    let hb = norm_weight(0, n, dx);
    for p in penalties(grid) {
        let form = penalty_form(state, grid, eta, &p);
        let rh = grid.index(p.side, p.node, h);
        let rw = grid.index(p.side, p.node, w2);
        for &(col, v) in &form {
            t.push((rh, col, v * (-0.5 * p.sigma / hb)));
            t.push((rw, col, v * (-0.5 * c / hb)));
        }
    }
    Ok(Generator { matrix: CsrMatrix::from_triplets(grid.unknowns(), t), grid: *grid, eta, state: *state })
}

impl Generator {
    /// Discrete energy 1/2 sum H (c^2|h|^2 + |w|^2 + |E|^2) + 1/2 |g|^2.
    pub fn energy(&self, u: &[Complex64]) -> f64 {
        let grid = &self.grid;
        let c2 = self.state.c * self.state.c;
        let dx = grid.spacing();
        let mut e = 0.0;
        for side in Side::BOTH {
            for i in 0..grid.n {
                let w = norm_weight(i, grid.n, dx);
                let mut s = c2 * u[grid.index(side, i, 0)].norm_sqr();
                for f in 1..FIELDS {
                    s += u[grid.index(side, i, f)].norm_sqr();
                }
                e += w * s;
            }
        }
        0.5 * (e + u[grid.front_index()].norm_sqr())
    }

    /// The exact rate of change of `energy` along the semi-discrete flow: the
    /// boundary terms left over after summation by parts, the penalties, and
    /// the front.
    pub fn energy_flux(&self, u: &[Complex64]) -> f64 {
        let grid = &self.grid;
        let c = self.state.c;
        let (h, w2) = (Field::H.index(), Field::W2.index());
        let mut flux = 0.0;
        for p in penalties(grid) {
            let hb = u[grid.index(p.side, p.node, h)];
            let wb = u[grid.index(p.side, p.node, w2)];
            let r = wb + hb * (p.sigma * c);
            let mut rt = Complex64::zero();
            for (col, v) in penalty_form(&self.state, grid, self.eta, &p) {
                rt += v * u[col];
            }
            flux += p.orientation * c * c * (hb.conj() * wb).re - 0.5 * c * (r.conj() * rt).re;
        }
        flux + (u[grid.front_index()].conj() * u[grid.index(Side::Upper, 0, w2)]).re
    }

    /// |h+(0) - h-(0)| and |w2+(0) - w2-(0) - 2 i v eta g|: the interface
    /// conditions, which the penalties impose only weakly.
    pub fn interface_defect(&self, u: &[Complex64]) -> (f64, f64) {
        let grid = &self.grid;
        let up = |f: usize| u[grid.index(Side::Upper, 0, f)];
        let lo = |f: usize| u[grid.index(Side::Lower, grid.n - 1, f)];
        let g = u[grid.front_index()];
        let (h, w2) = (Field::H.index(), Field::W2.index());
        let jump = I * (2.0 * self.state.v1_plus * self.eta) * g;
        ((up(h) - lo(h)).norm(), (up(w2) - lo(w2) - jump).norm())
    }

    /// Largest field magnitude at the two truncation boundaries.
    pub fn outer_boundary_max(&self, u: &[Complex64]) -> f64 {
        let grid = &self.grid;
        let mut m: f64 = 0.0;
        for side in Side::BOTH {
            let i = grid.outer_node(side);
            for f in 0..FIELDS {
                m = m.max(u[grid.index(side, i, f)].norm());
            }
        }
        m
    }
}
