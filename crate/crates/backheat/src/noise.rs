//! Seeded stochastic data synthesis for the two regression models:
//! pointwise Gaussian perturbation of the final data and Brownian-motion
//! perturbation of the source observations.
//!
//! Every noise stream is keyed on (seed, i, j, purpose), so a site's draws
//! do not depend on iteration order and the same dataset is produced whether
//! sites are generated serially or in parallel.

use crate::basis::GridSpec;
use crate::error::{Error, Result};
use crate::heat::ProblemInstance;
use crate::quadrature::TimeGrid;
use ndarray::{Array2, Array3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

const TAG_FINAL_DATA: u64 = 0x6669_6e61;
const TAG_SOURCE: u64 = 0x7372_6325;

fn site_rng(seed: u64, i: usize, j: usize, tag: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(i as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(j as u64).to_le_bytes());
    key[24..32].copy_from_slice(&tag.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// How a single noise level v is split between the two models.
///
/// The benchmark protocol equates the Gaussian variance with the Brownian
/// amplitude (sigma^2 = vartheta = v); `EqualAmplitude` instead uses the
/// same amplitude sqrt(v) for both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseConvention {
    Paper,
    EqualAmplitude,
}

impl NoiseConvention {
    /// Resolve a level v into (sigma, vartheta).
    pub fn resolve(self, level: f64) -> (f64, f64) {
        match self {
            NoiseConvention::Paper => (level.sqrt(), level),
            NoiseConvention::EqualAmplitude => (level.sqrt(), level.sqrt()),
        }
    }
}

/// Noise parameters: Gaussian scale sigma (or a per-site field), Brownian
/// amplitude vartheta, and the stream seed.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub vartheta: f64,
    pub seed: u64,
    pub sigma_field: Option<Array2<f64>>,
}

impl NoiseSpec {
    pub fn new(sigma: f64, vartheta: f64, seed: u64) -> Result<Self> {
        if sigma < 0.0 || vartheta < 0.0 {
            return Err(Error::OutOfRange { what: "noise level", value: sigma.min(vartheta) });
        }
        Ok(Self { sigma, vartheta, seed, sigma_field: None })
    }

    /// Resolve a benchmark noise level through a convention.
    pub fn from_level(level: f64, convention: NoiseConvention, seed: u64) -> Result<Self> {
        if level < 0.0 {
            return Err(Error::OutOfRange { what: "noise level", value: level });
        }
        let (sigma, vartheta) = convention.resolve(level);
        Self::new(sigma, vartheta, seed)
    }

    /// Attach a per-site sigma field; entries must be finite, non-negative
    /// and below the stated bound.
    pub fn with_sigma_field(mut self, field: Array2<f64>, v_max: f64) -> Result<Self> {
        if field.iter().any(|&v| !(v >= 0.0) || v >= v_max) {
            return Err(Error::OutOfRange { what: "sigma field entry", value: v_max });
        }
        self.sigma_field = Some(field);
        Ok(self)
    }

    fn sigma_at(&self, i: usize, j: usize) -> f64 {
        match &self.sigma_field {
            Some(f) => f[(i, j)],
            None => self.sigma,
        }
    }
}

/// i.i.d. standard normal draws scaled by sigma_ij, one independent stream
/// per site.
pub fn gaussian_field(spec: &NoiseSpec, grid: &GridSpec) -> Array2<f64> {
    Array2::from_shape_fn((grid.n(), grid.m()), |(i, j)| {
        let s = spec.sigma_at(i, j);
        if s == 0.0 {
            return 0.0;
        }
        let mut rng = site_rng(spec.seed, i, j, TAG_FINAL_DATA);
        s * rng.sample::<f64, _>(StandardNormal)
    })
}

/// Standard Brownian paths xi_ij over the time grid: xi(0) = 0 and
/// independent increments of variance dt. The amplitude vartheta is applied
/// by the caller; these are unit paths.
pub fn brownian_paths(spec: &NoiseSpec, grid: &GridSpec, time_grid: &TimeGrid) -> Array3<f64> {
    let k = time_grid.segments();
    let dt = time_grid.t_final() / k as f64;
    let sqrt_dt = dt.sqrt();
    let mut out = Array3::zeros((grid.n(), grid.m(), k + 1));
    for i in 0..grid.n() {
        for j in 0..grid.m() {
            let mut rng = site_rng(spec.seed, i, j, TAG_SOURCE);
            let mut acc = 0.0;
            for step in 1..=k {
                acc += sqrt_dt * rng.sample::<f64, _>(StandardNormal);
                out[(i, j, step)] = acc;
            }
        }
    }
    out
}

/// Observations of one problem: d = h + sigma eps on the grid and
/// g(t_k) = f(t_k) + vartheta xi(t_k) on grid x time grid.
#[derive(Debug, Clone)]
pub struct NoisyDataset {
    pub grid: GridSpec,
    pub time_grid: TimeGrid,
    /// Final-data observations d_ij.
    pub d: Array2<f64>,
    /// Source observations g_ij(t_k).
    pub g: Array3<f64>,
    pub spec: NoiseSpec,
}

/// Draw one dataset from a problem instance.
pub fn synthesize_dataset(
    instance: &ProblemInstance,
    grid: &GridSpec,
    time_grid: &TimeGrid,
    spec: &NoiseSpec,
) -> NoisyDataset {
    let mut d = grid.sample(|x, y| instance.h(x, y));
    d += &gaussian_field(spec, grid);
    let k = time_grid.segments();
    let mut g = Array3::zeros((grid.n(), grid.m(), k + 1));
    for (step, &t) in time_grid.points().iter().enumerate() {
        let ft = grid.sample(|x, y| instance.f(x, y, t));
        g.index_axis_mut(ndarray::Axis(2), step).assign(&ft);
    }
    if spec.vartheta > 0.0 {
        let xi = brownian_paths(spec, grid, time_grid);
        g.zip_mut_with(&xi, |gv, &xv| *gv += spec.vartheta * xv);
    }
    NoisyDataset { grid: grid.clone(), time_grid: time_grid.clone(), d, g, spec: spec.clone() }
}

impl NoisyDataset {
    /// Write the dataset as two CSV files in `dir`:
    /// `final_data.csv` with columns i,j,x,y,d and
    /// `source_data.csv` with columns i,j,k,t,g (long format).
    /// Values are printed with full round-trip precision.
    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut fd = std::io::BufWriter::new(std::fs::File::create(dir.join("final_data.csv"))?);
        writeln!(fd, "i,j,x,y,d")?;
        for i in 0..self.grid.n() {
            for j in 0..self.grid.m() {
                writeln!(
                    fd,
                    "{},{},{},{},{}",
                    i + 1,
                    j + 1,
                    self.grid.nodes_x()[i],
                    self.grid.nodes_y()[j],
                    self.d[(i, j)]
                )?;
            }
        }
        let mut fg = std::io::BufWriter::new(std::fs::File::create(dir.join("source_data.csv"))?);
        writeln!(fg, "i,j,k,t,g")?;
        for i in 0..self.grid.n() {
            for j in 0..self.grid.m() {
                for (k, &t) in self.time_grid.points().iter().enumerate() {
                    writeln!(fg, "{},{},{},{},{}", i + 1, j + 1, k, t, self.g[(i, j, k)])?;
                }
            }
        }
        Ok(())
    }

    /// Read a dataset back from the layout written by [`NoisyDataset::write_csv`].
    /// The noise spec is not recoverable from the files and is recorded as
    /// zero noise with seed 0.
    pub fn read_csv(dir: &Path) -> Result<Self> {
        let parse = |line: &str, ncols: usize| -> Result<Vec<f64>> {
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != ncols {
                return Err(Error::Config(format!("bad csv row: {line}")));
            }
            fields
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| Error::Config(format!("bad csv number {s}: {e}")))
                })
                .collect()
        };
        let fd = BufReader::new(std::fs::File::open(dir.join("final_data.csv"))?);
        let mut d_rows: Vec<(usize, usize, f64)> = Vec::new();
        let (mut n, mut m) = (0usize, 0usize);
        for (idx, line) in fd.lines().enumerate() {
            let line = line?;
            if idx == 0 {
                continue;
            }
            let v = parse(&line, 5)?;
            let (i, j) = (v[0] as usize, v[1] as usize);
            n = n.max(i);
            m = m.max(j);
            d_rows.push((i, j, v[4]));
        }
        let grid = GridSpec::new(n, m)?;
        let mut d = Array2::zeros((n, m));
        for (i, j, v) in d_rows {
            d[(i - 1, j - 1)] = v;
        }
        let fg = BufReader::new(std::fs::File::open(dir.join("source_data.csv"))?);
        let mut g_rows: Vec<(usize, usize, usize, f64, f64)> = Vec::new();
        let mut k_max = 0usize;
        let mut t_max: f64 = 0.0;
        for (idx, line) in fg.lines().enumerate() {
            let line = line?;
            if idx == 0 {
                continue;
            }
            let v = parse(&line, 5)?;
            let k = v[2] as usize;
            k_max = k_max.max(k);
            t_max = t_max.max(v[3]);
            g_rows.push((v[0] as usize, v[1] as usize, k, v[3], v[4]));
        }
        let time_grid = TimeGrid::new(t_max, k_max)?;
        let mut g = Array3::zeros((n, m, k_max + 1));
        for (i, j, k, _, v) in g_rows {
            g[(i - 1, j - 1, k)] = v;
        }
        Ok(Self { grid, time_grid, d, g, spec: NoiseSpec::new(0.0, 0.0, 0)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat::ProblemInstance;

    fn quiet_spec(seed: u64) -> NoiseSpec {
        NoiseSpec::new(1.0, 1.0, seed).unwrap()
    }

    #[test]
    fn zero_sigma_gives_zero_field() {
        let grid = GridSpec::new(8, 8).unwrap();
        let spec = NoiseSpec::new(0.0, 0.0, 7).unwrap();
        assert!(gaussian_field(&spec, &grid).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gaussian_field_deterministic_and_seed_sensitive() {
        let grid = GridSpec::new(6, 5).unwrap();
        let a = gaussian_field(&quiet_spec(42), &grid);
        let b = gaussian_field(&quiet_spec(42), &grid);
        assert_eq!(a, b);
        let c = gaussian_field(&quiet_spec(43), &grid);
        assert_ne!(a, c);
    }

    #[test]
    fn gaussian_field_moments() {
        let grid = GridSpec::new(200, 200).unwrap();
        let f = gaussian_field(&quiet_spec(1), &grid);
        let mean = f.mean().unwrap();
        let var = f.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (f.len() - 1) as f64;
        assert!(mean.abs() < 4.0 / 200.0, "mean {mean}");
        assert!((var - 1.0).abs() < 0.1, "var {var}");
    }

    #[test]
    fn brownian_paths_start_at_zero_and_scale() {
        let grid = GridSpec::new(200, 200).unwrap();
        let tg = TimeGrid::new(1.0, 100).unwrap();
        let xi = brownian_paths(&quiet_spec(3), &grid, &tg);
        for i in 0..grid.n() {
            for j in 0..grid.m() {
                assert_eq!(xi[(i, j, 0)], 0.0);
            }
        }
        // variance at t = 1 close to 1
        let vals: Vec<f64> = (0..grid.n())
            .flat_map(|i| (0..grid.m()).map(move |j| (i, j)))
            .map(|(i, j)| xi[(i, j, 100)])
            .collect();
        let var = vals.iter().map(|v| v * v).sum::<f64>() / vals.len() as f64;
        assert!((var - 1.0).abs() < 0.1, "var {var}");
        // covariance of xi(0.5) xi(1.0) close to 0.5
        let cov = (0..grid.n())
            .flat_map(|i| (0..grid.m()).map(move |j| (i, j)))
            .map(|(i, j)| xi[(i, j, 50)] * xi[(i, j, 100)])
            .sum::<f64>()
            / (grid.n() * grid.m()) as f64;
        assert!((cov - 0.5).abs() < 0.05, "cov {cov}");
    }

    #[test]
    fn dataset_noise_free_limit() {
        let inst = ProblemInstance::builtin_example(1).unwrap();
        let grid = GridSpec::new(9, 9).unwrap();
        let tg = TimeGrid::new(1.0, 20).unwrap();
        let spec = NoiseSpec::new(0.0, 0.0, 5).unwrap();
        let ds = synthesize_dataset(&inst, &grid, &tg, &spec);
        let h = grid.sample(|x, y| inst.h(x, y));
        assert_eq!(ds.d, h);
        for (k, &t) in tg.points().iter().enumerate() {
            let f = grid.sample(|x, y| inst.f(x, y, t));
            for i in 0..9 {
                for j in 0..9 {
                    assert_eq!(ds.g[(i, j, k)], f[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn dataset_source_starts_noise_free() {
        // Brownian paths vanish at t = 0, so g(., ., 0) is exact even with
        // noise switched on.
        let inst = ProblemInstance::builtin_example(2).unwrap();
        let grid = GridSpec::new(7, 7).unwrap();
        let tg = TimeGrid::new(1.0, 12).unwrap();
        let spec = NoiseSpec::new(0.5, 0.5, 11).unwrap();
        let ds = synthesize_dataset(&inst, &grid, &tg, &spec);
        let f0 = grid.sample(|x, y| inst.f(x, y, 0.0));
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(ds.g[(i, j, 0)], f0[(i, j)]);
            }
        }
    }

    #[test]
    fn different_seeds_share_noise_free_component() {
        let inst = ProblemInstance::builtin_example(1).unwrap();
        let grid = GridSpec::new(5, 5).unwrap();
        let tg = TimeGrid::new(1.0, 10).unwrap();
        let a = synthesize_dataset(&inst, &grid, &tg, &NoiseSpec::new(0.1, 0.1, 1).unwrap());
        let b = synthesize_dataset(&inst, &grid, &tg, &NoiseSpec::new(0.1, 0.1, 2).unwrap());
        let h = grid.sample(|x, y| inst.h(x, y));
        // noise differs, underlying field is shared
        assert_ne!(a.d, b.d);
        let da = &a.d - &h;
        let db = &b.d - &h;
        assert_ne!(da, db);
    }

    #[test]
    fn csv_roundtrip() {
        let inst = ProblemInstance::builtin_example(1).unwrap();
        let grid = GridSpec::new(4, 3).unwrap();
        let tg = TimeGrid::new(1.0, 8).unwrap();
        let ds = synthesize_dataset(&inst, &grid, &tg, &NoiseSpec::new(0.2, 0.3, 9).unwrap());
        let dir = std::env::temp_dir().join("backheat_csv_roundtrip_test");
        ds.write_csv(&dir).unwrap();
        let back = NoisyDataset::read_csv(&dir).unwrap();
        assert_eq!(back.grid, grid);
        assert_eq!(back.d, ds.d);
        assert_eq!(back.g, ds.g);
        assert_eq!(back.time_grid.points(), tg.points());
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn sigma_field_bound_enforced() {
        let spec = NoiseSpec::new(1.0, 0.0, 1).unwrap();
        let field = Array2::from_elem((2, 2), 0.5);
        assert!(spec.clone().with_sigma_field(field.clone(), 1.0).is_ok());
        assert!(spec.with_sigma_field(field, 0.4).is_err());
    }
}
