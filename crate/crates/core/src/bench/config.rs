use super::problem::{Example, MIN_REFINEMENT};
use crate::error::{Error, Result};
use crate::frac::FracOrder;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Number of POD modes for the reduced model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DSelection {
    /// Smallest d with L·(Σ_{j>d}λ_j)^{1/2} ≤ max(τ, h^{2−γ}).
    Auto,
    Fixed(usize),
}

impl DSelection {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "auto" {
            return Ok(DSelection::Auto);
        }
        s.parse::<usize>()
            .map(DSelection::Fixed)
            .map_err(|_| Error::config(format!("d must be a positive integer or `auto`, got `{s}`")))
    }
}

impl std::fmt::Display for DSelection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DSelection::Auto => write!(f, "auto"),
            DSelection::Fixed(d) => write!(f, "{d}"),
        }
    }
}

/// Parameters of one benchmark run.
///
/// The text form is one `key = value` per line with `#` comments:
///
/// ```text
/// example = 2
/// alpha = 1.5
/// beta = 1.6
/// T = 1
/// n_cells_x = 16
/// n_cells_y = 16
/// n_steps = 256
/// L = 34
/// d = auto
/// out = results/ex2
/// ```
///
/// Keys left out take the defaults of the chosen example.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub example: Example,
    pub alpha: f64,
    pub beta: f64,
    pub t_final: f64,
    pub n_cells_x: usize,
    pub n_cells_y: usize,
    pub n_steps: usize,
    pub snapshots: usize,
    pub d: DSelection,
    pub out_dir: PathBuf,
    pub seed: u64,
    /// Auxiliary-grid refinement factor for the manufactured source.
    pub refinement: usize,
}

const KEYS: &[&str] = &[
    "example", "alpha", "beta", "T", "n_cells_x", "n_cells_y", "n_steps", "L", "d", "out", "seed",
    "refinement",
];

impl RunConfig {
    pub fn for_example(example: Example) -> Self {
        Self {
            example,
            alpha: 1.5,
            beta: 1.6,
            t_final: 1.0,
            n_cells_x: 16,
            n_cells_y: 16,
            n_steps: 256,
            snapshots: if example == Example::MovingGaussian { 34 } else { 17 },
            d: DSelection::Auto,
            out_dir: PathBuf::from(format!("out/example_{}", example.id())),
            seed: 0,
            refinement: 32,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::config(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if entries.insert(key, value.trim()).is_some() {
                return Err(Error::config(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        let example = match entries.get("example") {
            Some(v) => Example::parse(v)?,
            None => Example::Smooth,
        };
        let mut cfg = Self::for_example(example);
        for (key, value) in entries {
            match key {
                "example" => {}
                "alpha" => cfg.alpha = num(key, value)?,
                "beta" => cfg.beta = num(key, value)?,
                "T" => cfg.t_final = num(key, value)?,
                "n_cells_x" => cfg.n_cells_x = num(key, value)?,
                "n_cells_y" => cfg.n_cells_y = num(key, value)?,
                "n_steps" => cfg.n_steps = num(key, value)?,
                "L" => cfg.snapshots = num(key, value)?,
                "d" => cfg.d = DSelection::parse(value)?,
                "out" => cfg.out_dir = PathBuf::from(value),
                "seed" => cfg.seed = num(key, value)?,
                "refinement" => cfg.refinement = num(key, value)?,
                _ => unreachable!("key list checked above"),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        FracOrder::new(self.alpha, self.beta).map_err(|e| Error::config(e.to_string()))?;
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::config(format!("T must be positive, got {}", self.t_final)));
        }
        if self.n_cells_x < 2 || self.n_cells_y < 2 {
            return Err(Error::config("n_cells_x and n_cells_y must be at least 2"));
        }
        if self.n_steps == 0 {
            return Err(Error::config("n_steps must be positive"));
        }
        if self.snapshots == 0 || self.snapshots > self.n_steps {
            return Err(Error::config(format!(
                "L must lie in [1, n_steps = {}], got {}",
                self.n_steps, self.snapshots
            )));
        }
        if self.d == DSelection::Fixed(0) {
            return Err(Error::config("d must be at least 1"));
        }
        if self.refinement < MIN_REFINEMENT {
            return Err(Error::config(format!(
                "refinement must be at least {MIN_REFINEMENT}, got {}",
                self.refinement
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> Result<FracOrder> {
        FracOrder::new(self.alpha, self.beta)
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.n_steps as f64
    }

    /// Larger of the two mesh widths.
    pub fn h(&self) -> f64 {
        1.0 / self.n_cells_x.min(self.n_cells_y) as f64
    }

    /// Canonical text form; `parse(to_text())` round-trips.
    pub fn to_text(&self) -> String {
        format!(
            "example = {}\nalpha = {}\nbeta = {}\nT = {}\nn_cells_x = {}\nn_cells_y = {}\n\
             n_steps = {}\nL = {}\nd = {}\nout = {}\nseed = {}\nrefinement = {}\n",
            self.example.id(),
            self.alpha,
            self.beta,
            self.t_final,
            self.n_cells_x,
            self.n_cells_y,
            self.n_steps,
            self.snapshots,
            self.d,
            self.out_dir.display(),
            self.seed,
            self.refinement
        )
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(format!("cannot parse `{value}` for key `{key}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_defaults() {
        let c1 = RunConfig::parse("").unwrap();
        assert_eq!(c1.example, Example::Smooth);
        assert_eq!((c1.n_cells_x, c1.n_steps, c1.snapshots), (16, 256, 17));
        assert_eq!(c1.tau(), 1.0 / 256.0);
        let c2 = RunConfig::parse("example = 2").unwrap();
        assert_eq!(c2.snapshots, 34);
    }

    #[test]
    fn overrides_comments_and_round_trip() {
        let text = "# header\nexample = 2 # moving\nL = 10\nd = 3\n\nalpha=1.7\nout = /tmp/x\n";
        let c = RunConfig::parse(text).unwrap();
        assert_eq!((c.snapshots, c.d, c.alpha), (10, DSelection::Fixed(3), 1.7));
        assert_eq!(c.out_dir, PathBuf::from("/tmp/x"));
        assert_eq!(RunConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "gamma = 1",
            "alpha = 2.5",
            "L = 1\nL = 2",
            "d = zero",
            "d = 0",
            "n_steps = -3",
            "refinement = 4",
            "L = 300",
            "example = 7",
            "no equals sign",
        ] {
            let err = RunConfig::parse(bad).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{bad}: {err}");
        }
    }
}
