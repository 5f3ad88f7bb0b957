//! Writing reports to a file or standard output.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use epspectra::export::{sci, to_json_string};
use serde::Serialize;

use crate::args::Format;
use crate::CliError;

/// Explicit format, else the `--out` extension, else `fallback`.
pub fn resolve_format(explicit: Option<Format>, out: Option<&Path>, fallback: Format) -> Format {
    explicit
        .or_else(|| match out?.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        })
        .unwrap_or(fallback)
}

/// Runs `body` against the output file (or stdout) and flushes it.
pub fn emit<F>(out: Option<&Path>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let io_err = |e: io::Error| {
        CliError::Io(format!(
            "{}: {e}",
            out.map_or("stdout".into(), |p| p.display().to_string())
        ))
    };
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            body(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            // a closed pipe (e.g. `| head`) is not an error
            match body(&mut w).and_then(|_| w.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(io_err),
            }
        }
    }
}

pub fn write_json<S: Serialize>(value: &S, w: &mut dyn Write) -> io::Result<()> {
    let s = to_json_string(value).map_err(io::Error::other)?;
    w.write_all(s.as_bytes())
}

/// Flattens a record into `key,value` rows with dotted keys.
pub fn write_key_value<S: Serialize>(value: &S, w: &mut dyn Write) -> io::Result<()> {
    let v = serde_json::to_value(value).map_err(io::Error::other)?;
    writeln!(w, "key,value")?;
    flatten("", &v, w)
}

fn flatten(prefix: &str, v: &serde_json::Value, w: &mut dyn Write) -> io::Result<()> {
    use serde_json::Value;
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, w)?;
            }
            Ok(())
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, w)?;
            }
            Ok(())
        }
        Value::Number(n) => match (n.as_i64(), n.as_f64()) {
            (Some(i), _) => writeln!(w, "{prefix},{i}"),
            (None, Some(f)) => writeln!(w, "{prefix},{}", sci(f)),
            _ => writeln!(w, "{prefix},{n}"),
        },
        Value::Null => writeln!(w, "{prefix},"),
        Value::Bool(b) => writeln!(w, "{prefix},{b}"),
        Value::String(s) => writeln!(w, "{prefix},{s}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_from_extension() {
        assert_eq!(
            resolve_format(None, Some(Path::new("a.csv")), Format::Json),
            Format::Csv
        );
        assert_eq!(
            resolve_format(None, Some(Path::new("a.txt")), Format::Json),
            Format::Json
        );
        assert_eq!(
            resolve_format(Some(Format::Json), Some(Path::new("a.csv")), Format::Csv),
            Format::Json
        );
        assert_eq!(resolve_format(None, None, Format::Csv), Format::Csv);
    }

    #[test]
    fn nested_keys_are_dotted() {
        let v = serde_json::json!({"a": {"b": [1.5, 2]}, "c": "x", "d": null});
        let mut buf = Vec::new();
        write_key_value(&v, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "key,value\na.b.0,1.500000000000e+00\na.b.1,2\nc,x\nd,\n"
        );
    }
}
