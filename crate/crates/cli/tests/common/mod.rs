use std::path::PathBuf;

pub fn cli_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// `(name, argv)` pairs from `tests/golden/cases.txt`.
pub fn golden_cases() -> Vec<(String, Vec<String>)> {
    let dir = cli_dir().join("tests");
    let fixtures = dir.join("fixtures");
    let text = std::fs::read_to_string(dir.join("golden/cases.txt")).expect("case list");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once('|').expect("name | args");
            let argv = std::iter::once("nilcommute".to_string())
                .chain(
                    args.split_whitespace()
                        .map(|a| a.replace("{fixtures}", fixtures.to_str().expect("utf-8 path"))),
                )
                .collect();
            (name.trim().to_string(), argv)
        })
        .collect()
}

pub fn golden_path(name: &str) -> PathBuf {
    cli_dir().join("tests/golden").join(format!("{name}.json"))
}
