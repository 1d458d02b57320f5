#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
    /// Output does not depend on the orientation convention.
    pub robust: bool,
}

pub fn cases() -> Vec<Case> {
    let mut out: Vec<Case> = fs::read_dir(golden_dir())
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            (p.extension()? == "args").then_some(p)
        })
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            let mut args: Vec<String> = text.lines().map(str::to_string).collect();
            let robust = args.first().is_some_and(|a| a == "#robust");
            if robust {
                args.remove(0);
            }
            Case { name: p.file_stem().unwrap().to_string_lossy().into_owned(), args, robust }
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

/// Exit code, stdout and stderr of one run, as stored in a golden file.
pub fn run(args: &[String], extra: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_wtower"))
        .args(extra)
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("spawn wtower");
    format!(
        "exit: {}\n--- stdout\n{}--- stderr\n{}",
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

pub fn golden_path(case: &Case) -> PathBuf {
    golden_dir().join(format!("{}.golden", case.name))
}
