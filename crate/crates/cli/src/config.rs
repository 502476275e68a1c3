//! Optional JSON config file mirroring the long flags.
//!
//! `--config file.json` is scanned out of the raw argv before clap runs;
//! every top-level key becomes a `--key value` argument appended to the
//! command line unless the flag was given explicitly, so explicit flags
//! always win. Values may be strings, numbers or booleans.

pub fn argv_with_config() -> Vec<String> {
    let argv: Vec<String> = std::env::args().collect();
    let Some(path) = find_config_path(&argv) else {
        return argv;
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config {path}: {e}");
            std::process::exit(4);
        }
    };
    let value: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: malformed config {path}: {e}");
            std::process::exit(4);
        }
    };
    let Some(map) = value.as_object() else {
        eprintln!("error: config {path} must be a JSON object");
        std::process::exit(4);
    };
    let mut merged = argv.clone();
    for (key, v) in map {
        let flag = format!("--{}", key.replace('_', "-"));
        if merged.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        match v {
            serde_json::Value::Bool(true) => merged.push(flag),
            serde_json::Value::Bool(false) => {}
            serde_json::Value::String(s) => {
                merged.push(flag);
                merged.push(s.clone());
            }
            other => {
                merged.push(flag);
                merged.push(other.to_string());
            }
        }
    }
    merged
}

fn find_config_path(argv: &[String]) -> Option<String> {
    let mut iter = argv.iter();
    while let Some(a) = iter.next() {
        if a == "--config" {
            return iter.next().cloned();
        }
        if let Some(rest) = a.strip_prefix("--config=") {
            return Some(rest.to_string());
        }
    }
    None
}
