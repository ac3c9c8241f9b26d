use std::collections::HashSet;
use std::path::Path;

use super::ExperimentError;
use crate::breaker::CheckMode;
use crate::engine::Player;

/// Who moves first in the game experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstPlayer {
    /// Maker below `c_{b+2}`, Breaker above.
    Auto,
    Maker,
    Breaker,
}

impl FirstPlayer {
    pub fn resolve(self, c: f64, c_k: f64) -> Player {
        match self {
            FirstPlayer::Maker => Player::Maker,
            FirstPlayer::Breaker => Player::Breaker,
            FirstPlayer::Auto if c < c_k => Player::Maker,
            FirstPlayer::Auto => Player::Breaker,
        }
    }
}

/// A parsed experiment file. The format is one `key = value` per line,
/// `#` starts a comment, lists are comma separated and float lists also
/// accept `start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub n: Vec<usize>,
    pub c: Vec<f64>,
    pub b: usize,
    /// Peeling threshold; `b + 2` for the game experiments.
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub makers: Vec<String>,
    pub breakers: Vec<String>,
    pub height: Option<usize>,
    pub l: Option<usize>,
    pub d0: Option<usize>,
    pub restarts: usize,
    pub first: FirstPlayer,
    pub checks: CheckMode,
    /// Peeling rounds for the histogram experiment.
    pub t: Vec<usize>,
    /// CSV destination; standard output when absent or `-`.
    pub output: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: String::new(),
            n: vec![10_000],
            c: vec![3.0],
            b: 1,
            k: 3,
            trials: 1,
            seed: 0,
            makers: vec!["naive".into()],
            breakers: vec!["sb".into()],
            height: None,
            l: None,
            d0: None,
            restarts: 10,
            first: FirstPlayer::Auto,
            checks: CheckMode::Touched,
            t: vec![1, 2, 3],
            output: None,
        }
    }
}

pub const MAKERS: [&str; 4] = ["naive", "two-phase", "random", "lowest"];
pub const BREAKERS: [&str; 4] = ["sb", "sb-refined", "random", "lowest"];

fn err(line: usize, msg: impl Into<String>) -> ExperimentError {
    ExperimentError::Config { line, msg: msg.into() }
}

fn parse_usize(s: &str) -> Option<usize> {
    let s = s.replace('_', "");
    if let Ok(v) = s.parse::<usize>() {
        return Some(v);
    }
    // 1e5 or 10^5
    if let Some((base, exp)) = s.split_once('^') {
        let base: usize = base.trim().parse().ok()?;
        let exp: u32 = exp.trim().parse().ok()?;
        return base.checked_pow(exp);
    }
    let f: f64 = s.parse().ok()?;
    (f >= 0.0 && f.fract() == 0.0 && f < 1e18).then_some(f as usize)
}

fn parse_list<T>(value: &str, line: usize, key: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>, ExperimentError> {
    let out: Vec<T> = value
        .split(',')
        .map(str::trim)
        .map(|s| item(s).ok_or_else(|| err(line, format!("{key}: cannot parse '{s}'"))))
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(err(line, format!("{key}: empty list")));
    }
    Ok(out)
}

fn parse_floats(value: &str, line: usize) -> Result<Vec<f64>, ExperimentError> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    if parts.len() == 3 {
        let nums: Vec<f64> = parts
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| err(line, format!("c: cannot parse '{s}'"))))
            .collect::<Result<_, _>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || !(stop >= start) {
            return Err(err(line, "c: range needs start <= stop and step > 0"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        if count > 100_000 {
            return Err(err(line, "c: range has too many points"));
        }
        // rounded so that 2.9 + 0.1 prints as 3
        return Ok((0..count)
            .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
            .collect());
    }
    let out = parse_list(value, line, "c", |s| s.parse::<f64>().ok())?;
    if out.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(err(line, "c: values must be finite and nonnegative"));
    }
    Ok(out)
}

fn parse_names(value: &str, line: usize, key: &str, known: &[&str]) -> Result<Vec<String>, ExperimentError> {
    let names = parse_list(value, line, key, |s| Some(s.to_string()))?;
    for name in &names {
        if !known.contains(&name.as_str()) {
            return Err(err(line, format!("{key}: unknown strategy '{name}' (known: {})", known.join(", "))));
        }
    }
    Ok(names)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut cfg = Self::default();
        let mut seen = HashSet::new();
        let mut b_line = None;
        let mut k_line = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected 'key = value', got '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(err(line, format!("{key}: missing value")));
            }
            if !seen.insert(key.to_string()) {
                return Err(err(line, format!("duplicate key '{key}'")));
            }
            let one = |v: &str| parse_usize(v).ok_or_else(|| err(line, format!("{key}: cannot parse '{v}'")));
            match key {
                "experiment" => cfg.experiment = value.to_string(),
                "n" => cfg.n = parse_list(value, line, key, parse_usize)?,
                "c" => cfg.c = parse_floats(value, line)?,
                "b" => {
                    cfg.b = one(value)?;
                    b_line = Some(line);
                }
                "k" => {
                    cfg.k = one(value)?;
                    k_line = Some(line);
                }
                "trials" => cfg.trials = one(value)?,
                "seed" => {
                    cfg.seed = value
                        .replace('_', "")
                        .parse()
                        .map_err(|_| err(line, format!("seed: cannot parse '{value}'")))?
                }
                "makers" | "maker" => cfg.makers = parse_names(value, line, key, &MAKERS)?,
                "breakers" | "breaker" => cfg.breakers = parse_names(value, line, key, &BREAKERS)?,
                "N" => cfg.height = Some(one(value)?),
                "L" => cfg.l = Some(one(value)?),
                "d0" => cfg.d0 = Some(one(value)?),
                "restarts" => cfg.restarts = one(value)?,
                "first" => {
                    cfg.first = match value {
                        "auto" => FirstPlayer::Auto,
                        "maker" => FirstPlayer::Maker,
                        "breaker" => FirstPlayer::Breaker,
                        _ => return Err(err(line, format!("first: expected auto, maker or breaker, got '{value}'"))),
                    }
                }
                "checks" => {
                    cfg.checks = match value {
                        "off" => CheckMode::Off,
                        "touched" => CheckMode::Touched,
                        "full" => CheckMode::Full,
                        _ => return Err(err(line, format!("checks: expected off, touched or full, got '{value}'"))),
                    }
                }
                "t" => cfg.t = parse_list(value, line, key, parse_usize)?,
                "output" => cfg.output = (value != "-").then(|| value.to_string()),
                _ => return Err(err(line, format!("unknown key '{key}'"))),
            }
        }
        if cfg.experiment.is_empty() {
            return Err(err(0, "missing key 'experiment'"));
        }
        if cfg.trials == 0 {
            return Err(err(seen_line(text, "trials"), "trials must be at least 1"));
        }
        if cfg.n.iter().any(|&n| n < 2) {
            return Err(err(seen_line(text, "n"), "n must be at least 2"));
        }
        if cfg.experiment == "phase-transition" {
            if cfg.b == 0 {
                return Err(err(b_line.unwrap_or(0), "b must be at least 1"));
            }
            match (b_line, k_line) {
                (_, Some(line)) if cfg.k != cfg.b + 2 => {
                    return Err(err(line, format!("k = {} does not match b + 2 = {}", cfg.k, cfg.b + 2)))
                }
                _ => cfg.k = cfg.b + 2,
            }
        } else if cfg.k < 2 {
            return Err(err(k_line.unwrap_or(0), "k must be at least 2"));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ExperimentError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Seed of trial `trial`.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

fn seen_line(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| l.split('#').next().unwrap_or("").split_once('=').is_some_and(|(k, _)| k.trim() == key))
        .map_or(0, |i| i + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lists_and_ranges() {
        let cfg = ExperimentConfig::parse(
            "experiment = phase-transition\n# comment\nn = 10^4, 1e5\nc = 2.9:3.1:0.1\nmakers = naive, two-phase\ntrials = 5 # inline\n",
        )
        .unwrap();
        assert_eq!(cfg.n, vec![10_000, 100_000]);
        assert_eq!(cfg.c, vec![2.9, 3.0, 3.1]);
        assert_eq!(cfg.makers, vec!["naive", "two-phase"]);
        assert_eq!(cfg.k, 3);
        assert_eq!(cfg.trial_seed(4), 4);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = ExperimentConfig::parse("experiment = shattering\n\nbogus = 1\n").unwrap_err();
        assert!(matches!(e, ExperimentError::Config { line: 3, .. }), "{e}");
        let e = ExperimentConfig::parse("experiment = shattering\nn = 5\nn = 6\n").unwrap_err();
        assert!(matches!(e, ExperimentError::Config { line: 3, .. }), "{e}");
        let e = ExperimentConfig::parse("experiment = shattering\ntrials = 0\n").unwrap_err();
        assert!(matches!(e, ExperimentError::Config { line: 2, .. }), "{e}");
        let e = ExperimentConfig::parse("experiment = x\nc = 3.0, abc\n").unwrap_err();
        assert!(matches!(e, ExperimentError::Config { line: 2, .. }), "{e}");
        let e = ExperimentConfig::parse("experiment = phase-transition\nk = 4\n").unwrap_err();
        assert!(matches!(e, ExperimentError::Config { line: 2, .. }), "{e}");
    }
}
