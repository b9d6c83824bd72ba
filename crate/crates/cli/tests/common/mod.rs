#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mixterm::syntax::{load, parse, Printer, Symbols};
use mixterm::{MixedTerm, Signature};

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn sig_path(name: &str) -> PathBuf {
    root().join("sigs").join(format!("{name}.sig"))
}

pub fn signature(name: &str) -> Signature {
    Signature::from_json(&fs::read_to_string(sig_path(name)).unwrap()).unwrap()
}

pub fn mixterm<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_mixterm")).args(args).output().expect("run mixterm")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Runs every `golden/<name>.args` (one argument per line) and compares
/// stdout byte for byte with `golden/<name>.out`.
pub fn golden() -> Result<String, String> {
    let dir = root().join("tests/golden");
    let mut names: Vec<_> = fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "args"))
        .collect();
    names.sort();
    if names.len() < 3 {
        return Err(format!("only {} golden cases found", names.len()));
    }
    for args_file in &names {
        let args: Vec<String> = fs::read_to_string(args_file).unwrap().lines().map(String::from).collect();
        let expected = fs::read(args_file.with_extension("out")).map_err(|e| format!("{}: {e}", args_file.display()))?;
        let out = mixterm(&args);
        if !out.status.success() || out.stdout != expected {
            return Err(format!(
                "{}: got {:?} (status {}), expected {:?}",
                name(args_file),
                stdout(&out),
                out.status,
                String::from_utf8_lossy(&expected)
            ));
        }
    }
    Ok(format!("{} golden files match", names.len()))
}

fn name(p: &Path) -> String {
    p.file_stem().unwrap().to_string_lossy().into_owned()
}

pub fn corpus() -> Vec<(String, String)> {
    fs::read_to_string(root().join("tests/corpus.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (sig, text) = l.split_once(": ").expect("sig: term");
            (sig.to_string(), text.to_string())
        })
        .collect()
}

/// print(parse(line)) == line for every corpus entry, parse(print(t)) == t,
/// and for finite entries the CLI prints the same text back.
pub fn round_trip() -> Result<String, String> {
    let entries = corpus();
    let mut finite = 0;
    for (sig_name, text) in &entries {
        let sig = signature(sig_name);
        let mut syms = Symbols::new();
        // truncations (with holes) are printable but are not terms
        let env = if text.contains('_') {
            parse(text, &sig, &mut syms).map(|(env, _)| env)
        } else {
            load(text, &sig, &mut syms)
        }
        .map_err(|e| format!("{text}: {e}"))?;
        if !text.contains('_') {
            MixedTerm::from_equations(&sig, &env).map_err(|e| format!("{text}: {e}"))?;
        }
        let printed = Printer::new(&syms, &sig).env(&env);
        if &printed != text {
            return Err(format!("{sig_name}: `{text}` printed as `{printed}`"));
        }
        let (again, _) = parse(&printed, &sig, &mut syms).map_err(|e| format!("{printed}: {e}"))?;
        if again != env {
            return Err(format!("{sig_name}: `{printed}` parsed differently"));
        }
        if env.equations.is_empty() && !text.contains('_') {
            finite += 1;
            let out = mixterm([
                "--sig".as_ref(),
                sig_path(sig_name).as_os_str(),
                "trunc".as_ref(),
                "--depth".as_ref(),
                "1000".as_ref(),
                text.as_ref(),
            ]);
            if stdout(&out) != format!("{text}\n") {
                return Err(format!("cli printed `{}` for `{text}`", stdout(&out).trim_end()));
            }
        }
    }
    if entries.len() != 50 {
        return Err(format!("corpus has {} entries, expected 50", entries.len()));
    }
    Ok(format!("{} corpus entries round-trip ({finite} through the binary)", entries.len()))
}
