//! Plain-text formats: configurations, soliton reports, components, speed
//! tables, run parameters and trajectory tables.

use std::fmt::Write as _;

use bbs_core::config::parse_config;
use bbs_core::slots::SlotComponents;
use bbs_core::speeds::SpeedTable;
use bbs_core::trajectory::TrajectorySet;
use bbs_core::{BallConfig, SolitonSet};

#[derive(Debug, Clone, PartialEq)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError(msg.into()))
}

pub fn read_config(text: &str) -> Result<BallConfig, FormatError> {
    parse_config(text).map_err(|e| FormatError(e.to_string()))
}

pub fn write_config(config: &BallConfig) -> String {
    format!("{config}\n")
}

fn join(sites: &[usize]) -> String {
    let mut s = String::new();
    for (i, x) in sites.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(s, "{x}").unwrap();
    }
    s
}

/// One line per soliton, ordered by `(leftmost, size)`.
pub fn soliton_report(set: &SolitonSet) -> String {
    let mut out = String::new();
    for s in set {
        writeln!(
            out,
            "k={} head={} tail={}",
            s.size(),
            join(&s.head),
            join(&s.tail)
        )
        .unwrap();
    }
    out
}

pub const COMPONENTS_HEADER: &str = "slots v1";

/// `slots v1`, then `k i count` per non-zero entry, then an optional
/// `# excursions N` line giving the number of excursions right of Record 0.
pub fn write_components(zeta: &SlotComponents, excursions: Option<usize>) -> String {
    let mut out = String::from(COMPONENTS_HEADER);
    out.push('\n');
    for (k, i, c) in zeta.iter() {
        writeln!(out, "{k} {i} {c}").unwrap();
    }
    if let Some(n) = excursions {
        writeln!(out, "# excursions {n}").unwrap();
    }
    out
}

pub fn read_components(text: &str) -> Result<(SlotComponents, Option<usize>), FormatError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == COMPONENTS_HEADER => {}
        other => {
            return err(format!(
                "expected header {COMPONENTS_HEADER:?}, found {other:?}"
            ))
        }
    }
    let mut zeta = SlotComponents::new();
    let mut excursions = None;
    for (n, line) in lines.enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("excursions") {
                let v = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| FormatError(format!("bad excursion count: {line}")))?;
                excursions = Some(v);
            }
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return err(format!("line {}: expected `k i count`", n + 2));
        }
        let k: usize = f[0]
            .parse()
            .map_err(|_| FormatError(format!("bad size {}", f[0])))?;
        let i: i64 = f[1]
            .parse()
            .map_err(|_| FormatError(format!("bad label {}", f[1])))?;
        let c: usize = f[2]
            .parse()
            .map_err(|_| FormatError(format!("bad count {}", f[2])))?;
        if k == 0 {
            return err("soliton sizes start at 1");
        }
        zeta.add(k, i, c);
    }
    Ok((zeta, excursions))
}

pub fn write_speeds(t: &SpeedTable) -> String {
    let mut out = String::from("k\trho\talpha\tw\ts\tv\th\n");
    for i in 0..t.len() {
        writeln!(
            out,
            "{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            i + 1,
            t.rho[i],
            t.alpha[i],
            t.w[i],
            t.s[i],
            t.v[i],
            t.h[i]
        )
        .unwrap();
    }
    writeln!(out, "w0\t{:.6}", t.w0).unwrap();
    writeln!(out, "v0\t{:.6}", t.v0).unwrap();
    writeln!(out, "h0\t{:.6}", t.h0).unwrap();
    out
}

/// Comma-separated list of reals.
pub fn parse_list(text: &str) -> Result<Vec<f64>, FormatError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| FormatError(format!("bad number {s:?}")))
        })
        .collect()
}

fn write_list(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    Iid,
    Components,
    Append,
}

impl std::str::FromStr for Sampler {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, FormatError> {
        match s {
            "iid" => Ok(Sampler::Iid),
            "components" => Ok(Sampler::Components),
            "append" => Ok(Sampler::Append),
            _ => err(format!("unknown sampler {s:?}")),
        }
    }
}

impl std::fmt::Display for Sampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sampler::Iid => "iid",
            Sampler::Components => "components",
            Sampler::Append => "append",
        })
    }
}

/// Run parameters (`key=value` lines, `#` comments).
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub seed: u64,
    pub sampler: Sampler,
    pub lambda: f64,
    pub rho: Option<Vec<f64>>,
    pub alpha: Option<Vec<f64>>,
    /// Truncation level; defaults to the length of `rho`/`alpha`.
    pub k: Option<usize>,
    pub n: usize,
    pub mix_steps: usize,
    pub steps: usize,
    pub format: String,
    pub repeat: usize,
    pub tags: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            seed: 0,
            sampler: Sampler::Iid,
            lambda: 0.25,
            rho: None,
            alpha: None,
            k: None,
            n: 2000,
            mix_steps: 50,
            steps: 140,
            format: "pgm".into(),
            repeat: 1,
            tags: 20,
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, FormatError> {
    v.parse()
        .map_err(|_| FormatError(format!("bad value for {key}: {v:?}")))
}

impl Params {
    pub fn parse(text: &str) -> Result<Params, FormatError> {
        let mut p = Params::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| FormatError(format!("line {}: expected key=value", n + 1)))?;
            p.set(key.trim(), value.trim())?;
        }
        Ok(p)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<(), FormatError> {
        match key {
            "seed" => self.seed = num(key, v)?,
            "sampler" => self.sampler = v.parse()?,
            "lambda" => self.lambda = num(key, v)?,
            "rho" => self.rho = Some(parse_list(v)?),
            "alpha" => self.alpha = Some(parse_list(v)?),
            "K" => self.k = Some(num(key, v)?),
            "n" => self.n = num(key, v)?,
            "mixSteps" => self.mix_steps = num(key, v)?,
            "steps" => self.steps = num(key, v)?,
            "format" => self.format = v.to_string(),
            "repeat" => self.repeat = num(key, v)?,
            "tags" => self.tags = num(key, v)?,
            _ => return err(format!("unknown parameter {key:?}")),
        }
        Ok(())
    }

    /// Every parameter, defaults included, in a fixed order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "seed={}", self.seed).unwrap();
        writeln!(out, "sampler={}", self.sampler).unwrap();
        writeln!(out, "lambda={}", self.lambda).unwrap();
        if let Some(r) = &self.rho {
            writeln!(out, "rho={}", write_list(r)).unwrap();
        }
        if let Some(a) = &self.alpha {
            writeln!(out, "alpha={}", write_list(a)).unwrap();
        }
        if let Some(k) = self.k {
            writeln!(out, "K={k}").unwrap();
        }
        writeln!(out, "n={}", self.n).unwrap();
        writeln!(out, "mixSteps={}", self.mix_steps).unwrap();
        writeln!(out, "steps={}", self.steps).unwrap();
        writeln!(out, "format={}", self.format).unwrap();
        writeln!(out, "repeat={}", self.repeat).unwrap();
        writeln!(out, "tags={}", self.tags).unwrap();
        out
    }
}

/// Truncates or zero-pads `v` to length `k`.
pub fn truncate(v: &[f64], k: Option<usize>) -> Vec<f64> {
    match k {
        None => v.to_vec(),
        Some(k) => (0..k).map(|i| v.get(i).copied().unwrap_or(0.0)).collect(),
    }
}

/// Long table: `id kind k t x y`. For solitons `y` counts the records at or
/// before `x`; for records `k` is 0 and `y` is the record label.
pub fn write_trajectories(traj: &TrajectorySet) -> String {
    let mut out = String::from("id\tkind\tk\tt\tx\ty\n");
    for (id, s) in traj.solitons.iter().enumerate() {
        for t in 0..s.position.len() {
            writeln!(
                out,
                "{id}\tsoliton\t{}\t{t}\t{}\t{}",
                s.size, s.position[t], s.records_before[t]
            )
            .unwrap();
        }
    }
    let base = traj.solitons.len();
    for (j, r) in traj.records.iter().enumerate() {
        for (t, x) in r.position.iter().enumerate() {
            writeln!(out, "{}\trecord\t0\t{t}\t{x}\t{}", base + j, r.label).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bbs_core::soliton::identify;
    use bbs_core::speeds::solve_rho;

    #[test]
    fn report_lines() {
        let set = identify(&read_config("1100 10").unwrap());
        assert_eq!(
            soliton_report(&set),
            "k=2 head=0,1 tail=2,3\nk=1 head=4 tail=5\n"
        );
    }

    #[test]
    fn components_round_trip() {
        let mut z = SlotComponents::new();
        z.set(2, -1, 1);
        z.set(1, 3, 2);
        let text = write_components(&z, Some(7));
        assert_eq!(text, "slots v1\n1 3 2\n2 -1 1\n# excursions 7\n");
        assert_eq!(read_components(&text).unwrap(), (z, Some(7)));
        assert!(read_components("1 2 3\n").is_err());
        assert!(read_components("slots v1\n0 1 1\n").is_err());
    }

    #[test]
    fn speed_table_text() {
        let t = solve_rho(&[0.0, 0.0, 0.1]).unwrap();
        let text = write_speeds(&t);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k\trho\talpha\tw\ts\tv\th");
        assert!(lines[1].contains("\t0.714286\t"));
        assert!(lines[2].contains("\t1.666667\t"));
        assert!(lines[3].contains("\t3.000000\t"));
        assert_eq!(lines[4], "w0\t1.600000");
        assert_eq!(lines[5], "v0\t1.800000");
        assert_eq!(lines[6], "h0\t1.125000");
    }

    #[test]
    fn params_round_trip() {
        let p =
            Params::parse("# four sizes\nrho=0.006,0.005,0.1,0.003\nsampler=append\nmixSteps=30\n")
                .unwrap();
        assert_eq!(p.seed, 0);
        assert_eq!(p.sampler, Sampler::Append);
        assert_eq!(p.rho.as_deref(), Some(&[0.006, 0.005, 0.1, 0.003][..]));
        assert_eq!(Params::parse(&p.to_text()).unwrap(), p);
        assert!(Params::parse("colour=red").is_err());
        assert!(Params::parse("n=ten").is_err());
    }
}
