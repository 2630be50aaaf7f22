//! Fixed parameter slices, one per named figure dataset.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt;
use std::str::FromStr;

use anyhow::bail;
use hyperon_qfim::dephasing::KernelVariant;
use hyperon_qfim::state::{preset_channel, Channel};
use hyperon_qfim::{NoiseModel, PhysicsParams};

use crate::grid::Grid;
use crate::sweep::{run_rows, SweepConfig, COLUMNS};
use crate::table::{Cell, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    F2a,
    F2b,
    F3a,
    F3b,
    F4a,
    F4b,
    F5a,
    F5b,
    F6,
    F7,
    F8,
    F9,
    F10,
}

impl FigureId {
    pub const ALL: [FigureId; 13] = [
        FigureId::F2a,
        FigureId::F2b,
        FigureId::F3a,
        FigureId::F3b,
        FigureId::F4a,
        FigureId::F4b,
        FigureId::F5a,
        FigureId::F5b,
        FigureId::F6,
        FigureId::F7,
        FigureId::F8,
        FigureId::F9,
        FigureId::F10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::F2a => "f2a",
            FigureId::F2b => "f2b",
            FigureId::F3a => "f3a",
            FigureId::F3b => "f3b",
            FigureId::F4a => "f4a",
            FigureId::F4b => "f4b",
            FigureId::F5a => "f5a",
            FigureId::F5b => "f5b",
            FigureId::F6 => "f6",
            FigureId::F7 => "f7",
            FigureId::F8 => "f8",
            FigureId::F9 => "f9",
            FigureId::F10 => "f10",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let key = s.to_ascii_lowercase();
        match FigureId::ALL.iter().find(|f| f.name() == key) {
            Some(&f) => Ok(f),
            None => bail!("unknown figure `{s}` (expected one of f2a..f5b, f6..f10)"),
        }
    }
}

/// One curve family of a figure.
struct Series {
    label: String,
    cfg: SweepConfig,
}

const PHI_POINTS: usize = 181;
const BETA: f64 = 0.4;

fn phi_grid() -> Grid {
    Grid { start: 0.0, stop: PI, count: PHI_POINTS }
}

fn free(alpha: f64, beta: f64) -> PhysicsParams {
    PhysicsParams::free(alpha, beta, 0.0).expect("valid slice")
}

/// `beta = 0.4`, `gamma = 0`, alpha over `[lo, hi]`.
fn theory_slice(lo: f64, hi: f64) -> Vec<Series> {
    let mut cfg = SweepConfig::new(free(lo, BETA), phi_grid());
    cfg.alpha_grid = Some(Grid { start: lo, stop: hi, count: 11 });
    vec![Series { label: "beta=0.4,gamma=0".into(), cfg }]
}

fn preset_series(channels: &[Channel], phis: Grid, noise: Option<(NoiseModel, Grid)>) -> Vec<Series> {
    channels
        .iter()
        .map(|&ch| {
            let mut cfg = SweepConfig::new(preset_channel(ch), phis);
            if let Some((m, times)) = noise {
                cfg.noise = Some(m);
                cfg.time_grid = Some(times);
            }
            Series { label: ch.name().into(), cfg }
        })
        .collect()
}

/// High-energy limit (`beta = gamma = 0`) as a function of alpha at several angles.
fn high_energy_alpha_scan() -> Vec<Series> {
    [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2]
        .iter()
        .map(|&phi| {
            let mut cfg = SweepConfig::new(free(0.0, 0.0), Grid::single(phi));
            cfg.alpha_grid = Some(Grid { start: -1.0, stop: 1.0, count: 201 });
            Series { label: format!("phi={phi:.6}"), cfg }
        })
        .collect()
}

fn noise(tau: f64, mu: f64) -> NoiseModel {
    NoiseModel::new(tau, mu, KernelVariant::RateNormalized).expect("valid noise")
}

fn angle_dynamics(tau: f64) -> Vec<Series> {
    let times = Grid { start: 0.0, stop: 5.0, count: 6 };
    let phis = Grid { start: 0.0, stop: PI, count: 91 };
    preset_series(&[Channel::XiZero, Channel::SigmaPlus], phis, Some((noise(tau, 0.4), times)))
}

fn alpha_dynamics(tau: f64) -> Vec<Series> {
    let times = Grid { start: 0.0, stop: 10.0, count: 101 };
    preset_series(&Channel::ALL, Grid::single(FRAC_PI_2), Some((noise(tau, 0.2), times)))
}

fn series(id: FigureId) -> Vec<Series> {
    let cascade_and_lambda = [Channel::Lambda, Channel::XiZero, Channel::XiMinus];
    match id {
        FigureId::F2a | FigureId::F5a => theory_slice(0.0, 1.0),
        FigureId::F3a | FigureId::F5b => theory_slice(-1.0, 0.0),
        FigureId::F2b => preset_series(&cascade_and_lambda, phi_grid(), None),
        FigureId::F3b => preset_series(&Channel::ALL, phi_grid(), None),
        FigureId::F4a | FigureId::F4b => high_energy_alpha_scan(),
        FigureId::F6 => unreachable!("ratio map has its own layout"),
        FigureId::F7 => angle_dynamics(0.2),
        FigureId::F8 => angle_dynamics(5.0),
        FigureId::F9 => alpha_dynamics(0.2),
        FigureId::F10 => alpha_dynamics(5.0),
    }
}

/// Ratio map over `(phi, alpha)` in the high-energy limit.
fn ratio_map() -> anyhow::Result<Table> {
    let mut cfg = SweepConfig::new(free(0.0, 0.0), Grid { start: 0.0, stop: PI, count: 91 });
    cfg.alpha_grid = Some(Grid { start: 0.0, stop: 1.0, count: 51 });
    let mut table = Table::new(["phi", "alpha", "gamma_ratio"]);
    for r in run_rows(&cfg)? {
        table.push(vec![Cell::Num(r.phi), Cell::Num(r.alpha), Cell::Num(r.bounds.gamma_ratio)]);
    }
    Ok(table)
}

/// Dataset of a figure: a `series` label followed by the sweep columns
/// (the ratio map has `phi, alpha, gamma_ratio` only).
pub fn figure_table(id: FigureId) -> anyhow::Result<Table> {
    if id == FigureId::F6 {
        return ratio_map();
    }
    let mut table = Table::new(std::iter::once("series").chain(COLUMNS));
    for s in series(id) {
        for row in run_rows(&s.cfg)? {
            let mut cells = vec![Cell::Text(s.label.clone())];
            cells.extend(row.cells());
            table.push(cells);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!("f11".parse::<FigureId>().is_err());
    }

    #[test]
    fn three_channel_figure_has_three_families() {
        let t = figure_table(FigureId::F2b).unwrap();
        let labels: std::collections::BTreeSet<String> = t
            .rows
            .iter()
            .map(|r| match &r[0] {
                Cell::Text(s) => s.clone(),
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(labels.len(), 3);
        assert_eq!(t.rows.len(), 3 * PHI_POINTS);
    }

    #[test]
    fn alpha_dynamics_covers_all_channels() {
        let t = figure_table(FigureId::F9).unwrap();
        assert_eq!(t.rows.len(), 4 * 101);
        let phi = t.column("phi").unwrap();
        assert!(phi.iter().all(|&p| p == FRAC_PI_2));
    }
}
