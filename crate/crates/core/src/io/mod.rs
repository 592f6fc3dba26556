//! Instance files.
//!
//! The canonical format is plain ASCII with LF line endings:
//!
//! ```text
//! # comment
//! W
//! n
//! w h      (n lines; w along the strip width, h along its length)
//! ```
//!
//! Published benchmark sets come in a few other layouts; [`Format`] lists
//! the ones understood here and [`Format::Auto`] probes the header to pick one.

mod dataset;

use std::fmt::Write as _;
use std::path::Path;

pub use dataset::{load_dataset, sha256_hex, DatasetEntry, DatasetManifest, Family, FamilyEntry};

use crate::error::ParseError;
use crate::instance::{Instance, Rotation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Auto,
    /// `W`, `n`, then `w h` lines.
    Canonical,
    /// `n`, `W H` (strip width and reference length), then `w h` or
    /// `id w h` lines. Used by the C, N, NT and KR distributions.
    Hopper,
    /// `n`, `W`, then `id w h` or `id w h demand` lines.
    Indexed,
    /// Berkey-Wang / Martello-Vigo class files: many instances per file,
    /// each with a four line labelled header and `h w` item lines.
    Bwmv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Format::Auto),
            "canonical" => Ok(Format::Canonical),
            "hopper" | "c" | "n" | "nt" | "kr" => Ok(Format::Hopper),
            "indexed" => Ok(Format::Indexed),
            "bwmv" | "class" => Ok(Format::Bwmv),
            other => Err(format!("unknown instance format `{other}`")),
        }
    }
}

/// A data line: its 1-based line number, integer tokens, and whether
/// non-numeric text followed them.
#[derive(Debug)]
struct Line {
    no: usize,
    ints: Vec<i64>,
    labelled: bool,
}

fn tokenize(text: &str) -> Result<Vec<Line>, ParseError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut ints = Vec::new();
        let mut labelled = false;
        for tok in content.split(|c: char| c.is_whitespace() || c == ',' || c == ';') {
            if tok.is_empty() {
                continue;
            }
            if labelled {
                continue;
            }
            match tok.parse::<i64>() {
                Ok(v) => ints.push(v),
                Err(_) => match tok.parse::<f64>() {
                    Ok(v) if v.fract() == 0.0 => ints.push(v as i64),
                    _ if !ints.is_empty() => labelled = true,
                    _ => {
                        return Err(ParseError::Malformed {
                            line: i + 1,
                            msg: format!("unexpected token `{tok}`"),
                        })
                    }
                },
            }
        }
        if !ints.is_empty() {
            lines.push(Line {
                no: i + 1,
                ints,
                labelled,
            });
        }
    }
    Ok(lines)
}

fn dim(v: i64, line: usize) -> Result<u32, ParseError> {
    if v <= 0 {
        return Err(ParseError::NonPositive { line });
    }
    u32::try_from(v).map_err(|_| ParseError::Malformed {
        line,
        msg: format!("{v} is too large"),
    })
}

fn count(v: i64, line: usize, what: &str) -> Result<usize, ParseError> {
    usize::try_from(v).map_err(|_| ParseError::Malformed {
        line,
        msg: format!("negative {what}"),
    })
}

fn detect(lines: &[Line], name_hint: &str) -> Format {
    let lower = name_hint.to_ascii_lowercase();
    let stem = Path::new(&lower)
        .file_name()
        .and_then(|f| f.to_str())
        .unwrap_or(&lower)
        .to_string();
    if stem.starts_with("cl_") || stem.starts_with("class") || stem.starts_with("bwmv") {
        return Format::Bwmv;
    }
    let Some(first) = lines.first() else {
        return Format::Canonical;
    };
    if first.labelled {
        return Format::Bwmv;
    }
    let Some(second) = lines.get(1) else {
        return Format::Canonical;
    };
    let body = &lines[2..];
    if first.ints.len() == 1 && second.ints.len() == 2 {
        return Format::Hopper;
    }
    if first.ints.len() == 1 && second.ints.len() == 1 {
        let first_v = first.ints[0];
        let second_v = second.ints[0];
        let wide_rows = body.iter().all(|l| l.ints.len() >= 3);
        if wide_rows && first_v as usize == body.len() {
            return Format::Indexed;
        }
        if second_v as usize == body.len() {
            return Format::Canonical;
        }
        if wide_rows {
            return Format::Indexed;
        }
    }
    Format::Canonical
}

fn item_rows(body: &[Line], expected: usize, allow_id: bool) -> Result<Vec<(u32, u32, u32)>, ParseError> {
    if body.len() < expected {
        return Err(ParseError::Truncated {
            expected,
            found: body.len(),
        });
    }
    let mut items = Vec::with_capacity(expected);
    for l in &body[..expected] {
        let (w, h, c) = match (l.ints.as_slice(), allow_id) {
            ([w, h], _) => (*w, *h, 1),
            ([_, w, h], true) => (*w, *h, 1),
            ([_, w, h, d], true) => (*w, *h, *d),
            _ => {
                return Err(ParseError::Malformed {
                    line: l.no,
                    msg: "expected an item line `w h`".into(),
                })
            }
        };
        let c = u32::try_from(c).map_err(|_| ParseError::Malformed {
            line: l.no,
            msg: "bad demand".into(),
        })?;
        items.push((dim(w, l.no)?, dim(h, l.no)?, c));
    }
    Ok(items)
}

fn single_value(l: &Line, what: &str) -> Result<i64, ParseError> {
    l.ints.first().copied().ok_or_else(|| ParseError::Malformed {
        line: l.no,
        msg: format!("missing {what}"),
    })
}

fn parse_with(lines: &[Line], format: Format, name: &str) -> Result<Vec<Instance>, ParseError> {
    let header = |i: usize| {
        lines.get(i).ok_or(ParseError::Truncated {
            expected: i + 1,
            found: lines.len(),
        })
    };
    match format {
        Format::Auto => parse_with(lines, detect(lines, name), name),
        Format::Canonical => {
            let w_line = header(0)?;
            let n_line = header(1)?;
            if w_line.ints.len() != 1 || n_line.ints.len() != 1 {
                return Err(ParseError::Malformed {
                    line: w_line.no,
                    msg: "expected the strip width and the item count on separate lines".into(),
                });
            }
            let width = dim(w_line.ints[0], w_line.no)?;
            let n = count(n_line.ints[0], n_line.no, "item count")?;
            let items = item_rows(&lines[2..], n, false)?;
            Ok(vec![Instance::from_types(name, width, items)])
        }
        Format::Hopper => {
            let n_line = header(0)?;
            let wh = header(1)?;
            let n = count(single_value(n_line, "item count")?, n_line.no, "item count")?;
            let width = dim(single_value(wh, "strip width")?, wh.no)?;
            let items = item_rows(&lines[2..], n, true)?;
            Ok(vec![Instance::from_types(name, width, items)])
        }
        Format::Indexed => {
            let n_line = header(0)?;
            let w_line = header(1)?;
            let n = count(single_value(n_line, "item count")?, n_line.no, "item count")?;
            let width = dim(single_value(w_line, "strip width")?, w_line.no)?;
            let items = item_rows(&lines[2..], n, true)?;
            Ok(vec![Instance::from_types(name, width, items)])
        }
        Format::Bwmv => parse_bwmv(lines, name),
    }
}

fn parse_bwmv(lines: &[Line], name: &str) -> Result<Vec<Instance>, ParseError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        if lines.len() - i < 4 {
            return Err(ParseError::Truncated {
                expected: 4,
                found: lines.len() - i,
            });
        }
        let class = single_value(&lines[i], "problem class")?;
        let n = count(single_value(&lines[i + 1], "item count")?, lines[i + 1].no, "item count")?;
        let numbers = &lines[i + 2].ints;
        let absolute = numbers.get(1).or(numbers.first()).copied().unwrap_or(out.len() as i64 + 1);
        let bin = &lines[i + 3];
        let [_, wbin, ..] = bin.ints[..] else {
            return Err(ParseError::Malformed {
                line: bin.no,
                msg: "expected `HBIN WBIN`".into(),
            });
        };
        let width = dim(wbin, bin.no)?;
        let body = &lines[i + 4..];
        if body.len() < n {
            return Err(ParseError::Truncated {
                expected: n,
                found: body.len(),
            });
        }
        let mut items = Vec::with_capacity(n);
        for l in &body[..n] {
            let [h, w, ..] = l.ints[..] else {
                return Err(ParseError::Malformed {
                    line: l.no,
                    msg: "expected an item line `h w`".into(),
                });
            };
            items.push((dim(w, l.no)?, dim(h, l.no)?));
        }
        let label = format!("{name}_c{class}_{absolute}");
        out.push(Instance::from_items(label, width, items));
        i += 4 + n;
    }
    if out.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(out)
}

/// Parses every instance in `text`. `name` names the instance and, for
/// [`Format::Auto`], serves as a filename hint.
pub fn parse_instances(text: &str, format: Format, name: &str) -> Result<Vec<Instance>, ParseError> {
    let lines = tokenize(text)?;
    if lines.is_empty() {
        return Err(ParseError::Empty);
    }
    let instances = parse_with(&lines, format, name)?;
    if instances.iter().any(|i| i.boxes.is_empty()) {
        return Err(ParseError::Empty);
    }
    Ok(instances)
}

/// Parses a single instance (the first one for multi-instance files).
pub fn parse_instance(bytes: &[u8], format: Format, name: &str) -> Result<Instance, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ParseError::Malformed {
        line: 0,
        msg: format!("not UTF-8: {e}"),
    })?;
    Ok(parse_instances(text, format, name)?.swap_remove(0))
}

/// Writes `instance` in the canonical format, one line per box.
pub fn to_canonical(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{}", instance.strip_width).unwrap();
    writeln!(out, "{}", instance.box_count()).unwrap();
    for b in &instance.boxes {
        for _ in 0..b.count {
            writeln!(out, "{} {}", b.width, b.length).unwrap();
        }
    }
    out
}

/// Boxes that fit the strip in no orientation under `rotation`. Parsing
/// accepts them since feasibility depends on the rotation mode.
pub fn width_warnings(instance: &Instance, rotation: Rotation) -> Vec<String> {
    instance
        .boxes
        .iter()
        .filter(|b| !b.fits_width(instance.strip_width, rotation))
        .map(|b| {
            format!(
                "box type {} ({}x{}) is wider than the strip ({}) under {rotation}",
                b.id, b.width, b.length, instance.strip_width
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_text() {
        let inst = parse_instance(b"# demo\n10\n3\n4 6\n6 6\n10 4\n", Format::Auto, "demo").unwrap();
        assert_eq!(inst.strip_width, 10);
        assert_eq!(inst.box_count(), 3);
        assert_eq!(inst.total_area(), 24 + 36 + 40);
    }

    #[test]
    fn identical_boxes_aggregate() {
        let inst = parse_instance(b"10\n3\n2 2\n2 2\n2 2\n", Format::Canonical, "agg").unwrap();
        assert_eq!(inst.boxes.len(), 1);
        assert_eq!(inst.boxes[0].count, 3);
        assert_eq!(inst.total_area(), 12);
    }

    #[test]
    fn hopper_layout() {
        let text = "3\n20 20\n1 20 10\n2 10 10\n3 10 10\n";
        let inst = parse_instance(text.as_bytes(), Format::Auto, "c1_1").unwrap();
        assert_eq!(inst.strip_width, 20);
        assert_eq!(inst.box_count(), 3);
        let plain = parse_instance(b"2\n20 5\n20 3\n20 2\n", Format::Auto, "x").unwrap();
        assert_eq!(plain.total_area(), 100);
    }

    #[test]
    fn indexed_layout() {
        let text = "2\n10\n0 4 6 2\n1 6 6 1\n";
        let inst = parse_instance(text.as_bytes(), Format::Auto, "n").unwrap();
        assert_eq!(inst.strip_width, 10);
        assert_eq!(inst.box_count(), 3);
    }

    #[test]
    fn bwmv_class_file() {
        let text = "\
  1  PROBLEM CLASS
  2  N. OF ITEMS
  1   1  RELATIVE AND ABSOLUTE N. OF INSTANCE
 10  10  HBIN,WBIN
  3   7  H(I),W(I),I=1,...,N
  5   2
  1  PROBLEM CLASS
  1  N. OF ITEMS
  2   2  RELATIVE AND ABSOLUTE N. OF INSTANCE
 10  10  HBIN,WBIN
  4   4  H(I),W(I),I=1,...,N
";
        let all = parse_instances(text, Format::Auto, "cl_01_020").unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].strip_width, 10);
        assert_eq!((all[0].boxes[0].width, all[0].boxes[0].length), (7, 3));
        assert_eq!(all[1].name, "cl_01_020_c1_2");
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_instance(b"10\n3\n2 2\n", Format::Canonical, "t"),
            Err(ParseError::Truncated { expected: 3, found: 1 })
        ));
        assert!(matches!(
            parse_instance(b"10\n1\n0 2\n", Format::Canonical, "t"),
            Err(ParseError::NonPositive { line: 3 })
        ));
        assert!(matches!(
            parse_instance(b"ten\n1\n2 2\n", Format::Canonical, "t"),
            Err(ParseError::Malformed { .. })
        ));
        assert!(matches!(parse_instance(b"", Format::Auto, "t"), Err(ParseError::Empty)));
    }

    #[test]
    fn oversized_boxes_only_warn() {
        let inst = parse_instance(b"5\n1\n8 3\n", Format::Canonical, "w").unwrap();
        assert_eq!(width_warnings(&inst, Rotation::Forbidden).len(), 1);
        assert!(width_warnings(&inst, Rotation::Allowed).is_empty());
    }

    #[test]
    fn canonical_output_is_exact() {
        let inst = Instance::from_items("x", 10, [(4, 6), (4, 6), (10, 4)]);
        assert_eq!(to_canonical(&inst), "10\n3\n4 6\n4 6\n10 4\n");
    }
}
