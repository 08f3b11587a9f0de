//! `key=value` configuration files. Flags given on the command line win.

use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct Config {
    pub window: Option<(i64, i64)>,
    pub probe_depth: Option<i64>,
    pub convention: Option<String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Config::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let mut cfg = Config::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", n + 1))?;
            let value = value.trim();
            match key.trim() {
                "window" => cfg.window = Some(parse_window(value)?),
                "probe_depth" => {
                    cfg.probe_depth = Some(value.parse().map_err(|_| format!("line {}: bad probe_depth", n + 1))?)
                }
                "convention" => cfg.convention = Some(value.to_string()),
                other => return Err(format!("line {}: unknown key `{other}`", n + 1)),
            }
        }
        Ok(cfg)
    }
}

/// Parses `lo..hi`.
pub fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("window `{s}`: expected lo..hi"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("window `{s}`: bad lower bound"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("window `{s}`: bad upper bound"))?;
    if lo > hi {
        return Err(format!("window `{s}` is empty"));
    }
    Ok((lo, hi))
}

/// Flag value if given, otherwise the configured one.
pub fn window(flag: Option<&str>, configured: Option<(i64, i64)>) -> Result<Option<(i64, i64)>, String> {
    match flag {
        Some(s) => parse_window(s).map(Some),
        None => Ok(configured),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let c = Config::parse("# defaults\nwindow = -5..5\nprobe_depth=3\nconvention=normalized\n").unwrap();
        assert_eq!(c.window, Some((-5, 5)));
        assert_eq!(c.probe_depth, Some(3));
        assert_eq!(c.convention.as_deref(), Some("normalized"));
        assert!(Config::parse("colour=red").is_err());
        assert!(parse_window("3..1").is_err());
    }
}
