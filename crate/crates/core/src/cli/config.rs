//! Run configuration: key=value file merged with command-line flags.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use super::CliError;
use crate::optimize::linspace;
use crate::pathfinder::EdgeConvention;
use crate::spinspace::TwiceSpin;

/// Evenly spaced grid written `start:end:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            vec![self.start]
        } else {
            linspace(self.start, self.end, self.count)
        }
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!("range '{s}' must look like start:end:count"));
        }
        let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite());
        let (Some(start), Some(end)) = (num(parts[0]), num(parts[1])) else {
            return Err(format!("range '{s}' has a non-numeric bound"));
        };
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("range '{s}' has a bad count"))?;
        if count == 0 {
            return Err(format!("range '{s}' is empty"));
        }
        if count > 1 && end <= start {
            return Err(format!("range '{s}' must have end > start"));
        }
        Ok(Self { start, end, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Which fits `scaling` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    KappaC,
    Catalysed,
    Uncatalysed,
    Lmg,
    Tstar,
    All,
}

impl Law {
    pub fn includes(self, other: Law) -> bool {
        // t* needs full rasters per j, so "all" leaves it out
        self == other || (self == Law::All && other != Law::Tstar)
    }
}

/// Every key a config file or flag may set.
pub const KEYS: [&str; 18] = [
    "command",
    "j",
    "p",
    "gamma-range",
    "kappa-range",
    "gz-range",
    "xi-range",
    "beta-range",
    "alpha-range",
    "x",
    "raster",
    "out",
    "format",
    "threads",
    "convention",
    "forced",
    "law",
    "resolution-check",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub js: Vec<f64>,
    pub p: u32,
    pub gamma: Option<Range>,
    pub kappa: Option<Range>,
    pub gz: Option<Range>,
    pub xi: Option<Range>,
    pub beta: Option<Range>,
    pub alpha: Option<Range>,
    pub x: f64,
    pub raster: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
    pub convention: EdgeConvention,
    pub forced: bool,
    pub law: Law,
    pub resolution_check: bool,
    /// Merged key=value pairs, echoed into output headers.
    pub entries: BTreeMap<String, String>,
}

/// Parses a config file body: one key=value per line, '#' starts a comment.
pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "config line {}: expected key=value",
                n + 1
            )));
        };
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Config(format!(
                "config line {}: unknown key '{k}'",
                n + 1
            )));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn bad(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key}: {msg}"))
}

fn parse_js(s: &str) -> Result<Vec<f64>, CliError> {
    let js = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| bad("j", format!("'{t}' is not a number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    for &j in &js {
        if j <= 0.0 || TwiceSpin::from_j(j).is_err() {
            return Err(bad("j", format!("{j} is not a positive half-integer")));
        }
    }
    if js.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("j", "list must be strictly increasing"));
    }
    Ok(js)
}

fn parse_bool(key: &str, s: &str) -> Result<bool, CliError> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(bad(key, format!("'{s}' is not a boolean"))),
    }
}

fn default_j(command: &str) -> &'static str {
    match command {
        "scaling" => "20,30,40,60,80,100",
        "path" => "40",
        "landscape" | "saddle" => "25",
        _ => "20",
    }
}

impl RunConfig {
    /// Builds the config for `command` from merged entries (flags already laid over the file).
    pub fn from_entries(
        command: &str,
        mut entries: BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        if let Some(c) = entries.get("command") {
            if c != command {
                return Err(bad(
                    "command",
                    format!("config file is for '{c}', not '{command}'"),
                ));
            }
        }
        entries.insert("command".into(), command.into());
        let get = |k: &str| entries.get(k).map(String::as_str);
        let range = |k: &str| -> Result<Option<Range>, CliError> {
            get(k)
                .map(|s| s.parse::<Range>().map_err(|e| bad(k, e)))
                .transpose()
        };
        let js = parse_js(get("j").unwrap_or(default_j(command)))?;
        let p: u32 = get("p")
            .unwrap_or("3")
            .parse()
            .map_err(|_| bad("p", "must be an integer"))?;
        if p < 2 {
            return Err(bad("p", "must be at least 2"));
        }
        let x: f64 = get("x")
            .unwrap_or("1")
            .parse()
            .map_err(|_| bad("x", "must be a number"))?;
        let raster: usize = get("raster")
            .unwrap_or("201")
            .parse()
            .map_err(|_| bad("raster", "must be an integer"))?;
        if raster < 2 {
            return Err(bad("raster", "needs at least two points"));
        }
        let format = match get("format").unwrap_or("csv") {
            "csv" => Format::Csv,
            "json" => Format::Json,
            f => return Err(bad("format", format!("'{f}' is not csv or json"))),
        };
        let threads = get("threads")
            .map(|s| {
                s.parse::<usize>()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| bad("threads", "must be a positive integer"))
            })
            .transpose()?;
        let convention = match get("convention").unwrap_or("destination") {
            "destination" => EdgeConvention::Destination,
            "source" => EdgeConvention::Source,
            "average" => EdgeConvention::Average,
            c => {
                return Err(bad(
                    "convention",
                    format!("'{c}' is not source, destination or average"),
                ))
            }
        };
        let law = match get("law").unwrap_or("catalysed") {
            "kappa" => Law::KappaC,
            "catalysed" => Law::Catalysed,
            "uncatalysed" => Law::Uncatalysed,
            "lmg" => Law::Lmg,
            "tstar" => Law::Tstar,
            "all" => Law::All,
            l => {
                return Err(bad(
                    "law",
                    format!("'{l}' is not kappa, catalysed, uncatalysed, lmg, tstar or all"),
                ))
            }
        };
        Ok(Self {
            command: command.into(),
            js,
            p,
            gamma: range("gamma-range")?,
            kappa: range("kappa-range")?,
            gz: range("gz-range")?,
            xi: range("xi-range")?,
            beta: range("beta-range")?,
            alpha: range("alpha-range")?,
            x,
            raster,
            out: get("out").map(PathBuf::from),
            format,
            threads,
            convention,
            forced: get("forced")
                .map(|s| parse_bool("forced", s))
                .transpose()?
                .unwrap_or(false),
            law,
            resolution_check: get("resolution-check")
                .map(|s| parse_bool("resolution-check", s))
                .transpose()?
                .unwrap_or(true),
            entries,
        })
    }

    /// Grid from the config or the given default.
    pub fn grid(&self, r: Option<Range>, default: &str) -> Vec<f64> {
        r.unwrap_or_else(|| default.parse().expect("valid default range"))
            .values()
    }

    pub fn spins(&self) -> Vec<TwiceSpin> {
        self.js
            .iter()
            .map(|&j| TwiceSpin::from_j(j).expect("validated"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r: Range = "0:1:3".parse().unwrap();
        assert_eq!(r.values(), vec![0.0, 0.5, 1.0]);
        assert_eq!("0.3:0.3:1".parse::<Range>().unwrap().values(), vec![0.3]);
        assert!("0:1:0".parse::<Range>().is_err());
        assert!("1:0:5".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
    }

    #[test]
    fn file_parsing() {
        let m = parse_file("# run\nj = 25\ngamma_range=0:1:5 # trailing\n\n").unwrap();
        assert_eq!(m["j"], "25");
        assert_eq!(m["gamma-range"], "0:1:5");
        assert!(parse_file("bogus=1").is_err());
        assert!(parse_file("j").is_err());
    }

    #[test]
    fn j_list_checked() {
        assert!(parse_js("20,40").is_ok());
        assert!(parse_js("40,20").is_err());
        assert!(parse_js("2.3").is_err());
        assert!(parse_js("0").is_err());
    }
}
