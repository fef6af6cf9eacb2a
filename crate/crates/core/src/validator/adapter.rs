//! Implementations under test: anything implementing [`Implementation`],
//! including external commands driven through [`ImplementationAdapter`].

use std::fmt;
use std::io::Read;
use std::process::{Command, Stdio};
use std::str::FromStr;
use std::thread;
use std::time::Duration;

use wait_timeout::ChildExt;

use crate::bits::BitString;
use crate::error::{Error, Result};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

/// Why a single case produced no usable output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseError {
    /// The command could not be started.
    Launch(String),
    /// Non-zero exit status (`None` when killed by a signal).
    Crashed {
        code: Option<i32>,
        stderr: String,
    },
    Timeout(Duration),
    /// Output could not be parsed or has the wrong length.
    Unparseable(String),
}

impl fmt::Display for CaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Launch(e) => write!(f, "could not launch: {e}"),
            Self::Crashed {
                code: Some(c),
                stderr,
            } => write!(f, "exited with status {c}: {}", stderr.trim()),
            Self::Crashed { code: None, stderr } => {
                write!(f, "terminated by signal: {}", stderr.trim())
            }
            Self::Timeout(d) => write!(f, "timed out after {d:?}"),
            Self::Unparseable(e) => write!(f, "unparseable output: {e}"),
        }
    }
}

/// An extractor implementation under test.
pub trait Implementation: Send + Sync {
    fn run(
        &self,
        x: &BitString,
        y: &BitString,
        output_length: usize,
    ) -> Result<BitString, CaseError>;
}

impl<F> Implementation for F
where
    F: Fn(&BitString, &BitString) -> Result<BitString, CaseError> + Send + Sync,
{
    fn run(
        &self,
        x: &BitString,
        y: &BitString,
        _output_length: usize,
    ) -> Result<BitString, CaseError> {
        self(x, y)
    }
}

/// Textual encoding of a bit string on the command line, in files or on
/// stdout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BitFormat {
    /// ASCII `0` / `1` characters.
    Binary,
    /// Lowercase hex, MSB first, left-padded to whole bytes.
    Hex,
}

impl BitFormat {
    pub fn encode(self, b: &BitString) -> String {
        match self {
            Self::Binary => b.to_binary_string(),
            Self::Hex => b.to_hex(),
        }
    }

    pub fn decode(self, s: &str, len: usize) -> Result<BitString> {
        match self {
            Self::Binary => {
                let b = BitString::from_binary_str(s)?;
                if b.len() != len {
                    return Err(Error::LengthMismatch {
                        what: "output",
                        expected: len,
                        found: b.len(),
                    });
                }
                Ok(b)
            }
            Self::Hex => BitString::from_hex(s, len),
        }
    }
}

impl FromStr for BitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" | "binary-string" => Ok(Self::Binary),
            "hex" => Ok(Self::Hex),
            _ => Err(Error::AdapterConfig(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputMethod {
    /// Values substituted into the command line; result read from stdout.
    Stdio,
    /// Values written to temporary files whose paths are substituted; the
    /// command writes its result to the path substituted for `$OUTPUT$`.
    Files,
}

impl FromStr for InputMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stdio" => Ok(Self::Stdio),
            "files" => Ok(Self::Files),
            _ => Err(Error::AdapterConfig(format!("unknown input method {s:?}"))),
        }
    }
}

pub const SEED: &str = "$SEED$";
pub const INPUT: &str = "$INPUT$";
pub const OUTPUT: &str = "$OUTPUT$";

/// Runs an external command once per case.
#[derive(Clone, Debug)]
pub struct ImplementationAdapter {
    input_method: InputMethod,
    argv: Vec<String>,
    seed_format: Option<BitFormat>,
    input_format: Option<BitFormat>,
    output_format: BitFormat,
    timeout: Duration,
}

impl ImplementationAdapter {
    /// `serializers` maps each placeholder (`$SEED$`, `$INPUT$`) present in
    /// the template to its encoding.
    pub fn new(
        input_method: InputMethod,
        command_template: &str,
        serializers: &[(&str, BitFormat)],
        output_format: BitFormat,
    ) -> Result<Self> {
        for p in [SEED, INPUT, OUTPUT] {
            if command_template.matches(p).count() > 1 {
                return Err(Error::AdapterConfig(format!(
                    "placeholder {p} appears more than once"
                )));
            }
        }
        if let Some((p, _)) = serializers.iter().find(|(p, _)| *p != SEED && *p != INPUT) {
            return Err(Error::AdapterConfig(format!("unknown placeholder {p}")));
        }
        let lookup = |p: &str| -> Result<Option<BitFormat>> {
            let fmt = serializers.iter().find(|(q, _)| *q == p).map(|&(_, f)| f);
            if command_template.contains(p) && fmt.is_none() {
                return Err(Error::AdapterConfig(format!(
                    "no serializer for placeholder {p}"
                )));
            }
            Ok(fmt)
        };
        let seed_format = lookup(SEED)?;
        let input_format = lookup(INPUT)?;
        if input_method == InputMethod::Files && !command_template.contains(OUTPUT) {
            return Err(Error::AdapterConfig(format!(
                "files input method needs an {OUTPUT} placeholder"
            )));
        }
        let argv = shell_words::split(command_template)
            .map_err(|e| Error::AdapterConfig(format!("cannot split command: {e}")))?;
        if argv.is_empty() {
            return Err(Error::AdapterConfig("empty command".into()));
        }
        Ok(Self {
            input_method,
            argv,
            seed_format,
            input_format,
            output_format,
            timeout: DEFAULT_TIMEOUT,
        })
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    fn substitute(&self, seed: &str, input: &str, output: &str) -> Vec<String> {
        self.argv
            .iter()
            .map(|a| {
                a.replace(SEED, seed)
                    .replace(INPUT, input)
                    .replace(OUTPUT, output)
            })
            .collect()
    }

    fn execute(&self, args: &[String]) -> Result<String, CaseError> {
        let mut child = Command::new(&args[0])
            .args(&args[1..])
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| CaseError::Launch(format!("{}: {e}", args[0])))?;
        let mut stdout = child.stdout.take().unwrap();
        let mut stderr = child.stderr.take().unwrap();
        let out_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout.read_to_string(&mut s);
            s
        });
        let err_reader = thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });
        let status = match child.wait_timeout(self.timeout) {
            Ok(Some(status)) => status,
            Ok(None) => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(CaseError::Timeout(self.timeout));
            }
            Err(e) => return Err(CaseError::Launch(e.to_string())),
        };
        let out = out_reader.join().unwrap_or_default();
        let err = err_reader.join().unwrap_or_default();
        if !status.success() {
            return Err(CaseError::Crashed {
                code: status.code(),
                stderr: err,
            });
        }
        Ok(out)
    }

    fn parse(&self, text: &str, output_length: usize) -> Result<BitString, CaseError> {
        self.output_format
            .decode(text.trim(), output_length)
            .map_err(|e| CaseError::Unparseable(e.to_string()))
    }
}

impl Implementation for ImplementationAdapter {
    fn run(
        &self,
        x: &BitString,
        y: &BitString,
        output_length: usize,
    ) -> Result<BitString, CaseError> {
        let seed = self.seed_format.map(|f| f.encode(y)).unwrap_or_default();
        let input = self.input_format.map(|f| f.encode(x)).unwrap_or_default();
        match self.input_method {
            InputMethod::Stdio => {
                let out = self.execute(&self.substitute(&seed, &input, ""))?;
                self.parse(&out, output_length)
            }
            InputMethod::Files => {
                let io = |e: std::io::Error| CaseError::Launch(format!("temporary files: {e}"));
                let dir = tempfile::tempdir().map_err(io)?;
                let seed_path = dir.path().join("seed.txt");
                let input_path = dir.path().join("input.txt");
                let output_path = dir.path().join("output.txt");
                std::fs::write(&seed_path, &seed).map_err(io)?;
                std::fs::write(&input_path, &input).map_err(io)?;
                let args = self.substitute(
                    &seed_path.to_string_lossy(),
                    &input_path.to_string_lossy(),
                    &output_path.to_string_lossy(),
                );
                self.execute(&args)?;
                let out = std::fs::read_to_string(&output_path)
                    .map_err(|e| CaseError::Unparseable(format!("output file: {e}")))?;
                self.parse(&out, output_length)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_errors() {
        let cfg = |t: &str, s: &[(&str, BitFormat)], m| {
            ImplementationAdapter::new(m, t, s, BitFormat::Hex)
        };
        let both = [(SEED, BitFormat::Hex), (INPUT, BitFormat::Hex)];
        assert!(cfg("./x $SEED$ $INPUT$", &both, InputMethod::Stdio).is_ok());
        assert!(cfg("./x $SEED$ $INPUT$", &both[..1], InputMethod::Stdio).is_err());
        assert!(cfg("./x $SEED$ $SEED$", &both, InputMethod::Stdio).is_err());
        assert!(cfg("./x $SEED$ $INPUT$", &both, InputMethod::Files).is_err());
        assert!(cfg("./x $SEED$ $INPUT$ $OUTPUT$", &both, InputMethod::Files).is_ok());
        assert!(cfg("", &both, InputMethod::Stdio).is_err());
        assert!(cfg(
            "./x $SEED$",
            &[("$OTHER$", BitFormat::Hex)],
            InputMethod::Stdio
        )
        .is_err());
    }

    #[test]
    fn formats() {
        let b = BitString::from_binary_str("1011").unwrap();
        assert_eq!(BitFormat::Binary.encode(&b), "1011");
        assert_eq!(BitFormat::Hex.encode(&b), "0b");
        assert_eq!(BitFormat::Hex.decode("0b", 4).unwrap(), b);
        assert!(BitFormat::Binary.decode("101", 4).is_err());
        assert_eq!(
            "binary-string".parse::<BitFormat>().unwrap(),
            BitFormat::Binary
        );
    }

    #[cfg(unix)]
    #[test]
    fn runs_shell_commands() {
        let x = BitString::from_binary_str("0110").unwrap();
        let y = BitString::from_binary_str("1").unwrap();
        let echo = ImplementationAdapter::new(
            InputMethod::Stdio,
            "echo $INPUT$",
            &[(INPUT, BitFormat::Binary)],
            BitFormat::Binary,
        )
        .unwrap();
        assert_eq!(echo.run(&x, &y, 4).unwrap(), x);
        assert!(matches!(
            echo.run(&x, &y, 3),
            Err(CaseError::Unparseable(_))
        ));

        let copy = ImplementationAdapter::new(
            InputMethod::Files,
            "cp $INPUT$ $OUTPUT$",
            &[(INPUT, BitFormat::Hex)],
            BitFormat::Hex,
        )
        .unwrap();
        assert_eq!(copy.run(&x, &y, 4).unwrap(), x);

        let fail =
            ImplementationAdapter::new(InputMethod::Stdio, "false", &[], BitFormat::Hex).unwrap();
        assert!(matches!(
            fail.run(&x, &y, 4),
            Err(CaseError::Crashed { code: Some(1), .. })
        ));

        let missing = ImplementationAdapter::new(
            InputMethod::Stdio,
            "/nonexistent/binary",
            &[],
            BitFormat::Hex,
        )
        .unwrap();
        assert!(matches!(missing.run(&x, &y, 4), Err(CaseError::Launch(_))));

        let slow = ImplementationAdapter::new(InputMethod::Stdio, "sleep 5", &[], BitFormat::Hex)
            .unwrap()
            .with_timeout(Duration::from_millis(100));
        assert!(matches!(slow.run(&x, &y, 4), Err(CaseError::Timeout(_))));
    }
}
