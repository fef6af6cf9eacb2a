use std::path::Path;
use std::process::{Command, Output};

const REFERENCE: &str = env!("CARGO_BIN_EXE_pa-reference");
const MUTANT: &str = env!("CARGO_BIN_EXE_pa-mutant");
const GOLDEN: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../core/tests/data/modified_toeplitz_128_64.rsp"
);

fn privamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_privamp"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn extract_golden_count_zero() {
    let o = privamp(&[
        "extract",
        "--type",
        "modified-toeplitz",
        "-n",
        "128",
        "-m",
        "64",
        "--input",
        "e3fc097a6dcc77fc781a7ed3533528c8",
        "--seed",
        "05f47ea39db462da99e3e29b06721ae6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "ab264a34f8ebc27c\n");
}

#[test]
fn extract_zero_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.hex");
    let out = dir.path().join("out.hex");
    std::fs::write(&input, "0".repeat(16)).unwrap();
    let o = privamp(&[
        "extract",
        "--type",
        "toeplitz",
        "-n",
        "64",
        "-m",
        "16",
        "--input-file",
        input.to_str().unwrap(),
        "--seed",
        "5a5a5a5a5a5a5a5a5a5a",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(std::fs::read_to_string(out).unwrap(), "0000\n");
}

#[test]
fn extract_wrong_seed_length() {
    let o = privamp(&[
        "extract",
        "--type",
        "modified-toeplitz",
        "-n",
        "128",
        "-m",
        "64",
        "--input",
        "e3fc097a6dcc77fc781a7ed3533528c8",
        "--seed",
        "05f4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("127 bits"));
}

#[test]
fn extract_argument_errors() {
    assert_eq!(
        privamp(&["extract", "--type", "toeplitz", "-n", "8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        privamp(&[
            "extract", "--type", "cubic", "-n", "8", "-m", "1", "--input", "00", "--seed", "00"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        privamp(&[
            "extract", "--type", "toeplitz", "-n", "8", "-m", "9", "--input", "00", "--seed",
            "0000"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn params_outputs() {
    let o = privamp(&[
        "params",
        "--type",
        "toeplitz",
        "-n",
        "8388608",
        "--entropy",
        "0.5",
        "--error",
        "1e-6",
    ]);
    assert_eq!(
        (o.status.code(), stdout(&o)),
        (Some(0), "4194266\n".to_string())
    );
    let o = privamp(&["params", "-n", "10", "--entropy", "1.0", "--error", "0.5"]);
    assert_eq!(stdout(&o), "10\n");
    assert_eq!(
        privamp(&["params", "-n", "10", "--entropy", "1.0", "--error", "2.0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        privamp(&["params", "-n", "10", "--entropy", "0", "--error", "0.1"])
            .status
            .code(),
        Some(2)
    );
    let o = privamp(&[
        "params",
        "--type",
        "trevisan",
        "-n",
        "1048576",
        "--entropy",
        "0.5",
        "--error",
        "1e-6",
        "-t",
        "1024",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("field degree l = 512"));
}

fn target(bin: &str, extra: &str, cfg: &str) -> String {
    format!("{bin} {extra} {cfg} $SEED$ $INPUT$")
}

#[test]
fn validate_reference_wrapper_passes() {
    let cfg = "--type toeplitz -n 3 -m 2";
    let o = privamp(&[
        "validate",
        "--type",
        "toeplitz",
        "-n",
        "3",
        "-m",
        "2",
        "--exhaustive",
        "--command",
        &target(REFERENCE, "", cfg),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("128 exhaustive cases, 0 failed"));
}

#[test]
fn validate_files_mode_with_hex() {
    let cfg = "--type modified-toeplitz -n 16 -m 8 --format hex";
    let o = privamp(&[
        "validate",
        "--type",
        "modified-toeplitz",
        "-n",
        "16",
        "-m",
        "8",
        "--input-method",
        "files",
        "--seed-format",
        "hex",
        "--input-format",
        "hex",
        "--output-format",
        "hex",
        "--samples",
        "50",
        "--rng-seed",
        "4",
        "--command",
        &format!("{REFERENCE} {cfg} $SEED$ $INPUT$ $OUTPUT$"),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn validate_mutant_reports_last_bit() {
    let cfg = "--type modified-toeplitz -n 32 -m 16";
    let o = Command::new(env!("CARGO_BIN_EXE_privamp"))
        .args([
            "validate",
            "--type",
            "modified-toeplitz",
            "-n",
            "32",
            "-m",
            "16",
            "--samples",
            "400",
            "--rng-seed",
            "8",
            "--command",
            &target(MUTANT, "--mutant drop-last-bit", cfg),
        ])
        .env("PRIVAMP_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(
        stdout(&o).contains("input bit 31 is set in 100.0% of failures"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn validate_unlaunchable_command() {
    let o = privamp(&[
        "validate",
        "--type",
        "toeplitz",
        "-n",
        "3",
        "-m",
        "2",
        "--command",
        "/nonexistent/target $SEED$ $INPUT$",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn vectors_verify_bundled_file() {
    let o = privamp(&["vectors", "verify", GOLDEN]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("8 of 8 cases passed"));
}

#[test]
fn vectors_gen_then_verify_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let gen = |name: &str| {
        let path = dir.path().join(name);
        let o = privamp(&[
            "vectors",
            "gen",
            "--type",
            "trevisan",
            "-n",
            "16",
            "-m",
            "2",
            "-t",
            "2",
            "--count",
            "5",
            "--rng-seed",
            "12",
            "-o",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        path
    };
    let (a, b) = (gen("a.rsp"), gen("b.rsp"));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        privamp(&["vectors", "verify", a.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn vectors_verify_tampered_and_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(GOLDEN).unwrap();
    let tampered = dir.path().join("t.rsp");
    std::fs::write(
        &tampered,
        text.replace("48f041d38296ffcc", "48f041d38296ffcd"),
    )
    .unwrap();
    let o = privamp(&["vectors", "verify", tampered.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("failing COUNT: 3"));

    let broken = dir.path().join("b.rsp");
    std::fs::write(&broken, text.replace("SEED = 05b7", "SEED = zzb7")).unwrap();
    assert_eq!(
        privamp(&["vectors", "verify", broken.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        privamp(&["vectors", "verify", "/nonexistent.rsp"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn help_for_every_subcommand() {
    for sub in [
        &["extract"][..],
        &["params"],
        &["validate"],
        &["vectors", "gen"],
        &["vectors", "verify"],
    ] {
        let mut args = sub.to_vec();
        args.push("--help");
        assert_eq!(privamp(&args).status.code(), Some(0), "{sub:?}");
    }
}

#[test]
fn target_binaries_follow_the_contract() {
    let o = Command::new(REFERENCE)
        .args(["--type", "toeplitz", "-n", "3", "-m", "2", "1011", "101"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim().len(), 2);
    let bad = Command::new(REFERENCE)
        .args(["--type", "toeplitz", "-n", "3", "-m", "2", "10", "101"])
        .output()
        .unwrap();
    assert_ne!(bad.status.code(), Some(0));
    assert!(Path::new(MUTANT).exists());
}
