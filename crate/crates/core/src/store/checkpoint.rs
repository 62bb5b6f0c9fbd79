//! Line-oriented text serialization of orbit databases.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_bigint::BigUint;

use crate::scalar::Scalar;

use super::{Metadata, OrbitDatabase, OrbitRecord, Status};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "grouphull-orbits";

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported file format: {0}")]
    Version(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("database is for field {found}, expected {expected}")]
    Field { expected: String, found: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

fn radicand_text(r: Option<u32>) -> String {
    r.map_or_else(|| "Q".to_string(), |d| format!("Q(sqrt {d})"))
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Serializes the database. The output is a pure function of its contents.
pub fn to_text<F: Scalar>(db: &OrbitDatabase<F>) -> String {
    let m = &db.meta;
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC} {FORMAT_VERSION}");
    let _ = writeln!(s, "group {}", m.group);
    let _ = writeln!(s, "field {}", radicand_text(m.radicand));
    let _ = writeln!(s, "symmetry_order {}", m.symmetry_order);
    let _ = writeln!(s, "ambient_dim {}", m.ambient_dim);
    let _ = writeln!(s, "full_dim {}", m.full_dim);
    let _ = writeln!(s, "vertices {}", m.vertex_count);
    for (k, v) in &m.config {
        let _ = writeln!(s, "config {k}={v}");
    }
    let _ = writeln!(s, "orbits {}", db.len());
    for r in db.records() {
        let _ = writeln!(s, "orbit");
        let _ = writeln!(s, "key {}", join(&r.key));
        let _ = writeln!(s, "normal {}", join(&r.normal));
        let _ = writeln!(s, "rhs {}", r.rhs);
        let _ = writeln!(s, "stabilizer {}", r.stabilizer_order);
        let _ = writeln!(s, "orbit_size {}", r.orbit_size);
        let _ = writeln!(s, "rank {}", r.rank.map_or_else(|| "-".to_string(), |x| x.to_string()));
        let _ = writeln!(s, "status {}", r.status);
        let _ = writeln!(s, "end");
    }
    s
}

/// Writes to a temporary file next to `path`, then renames it into place.
pub fn save_checkpoint<F: Scalar>(db: &OrbitDatabase<F>, path: &Path) -> Result<(), CheckpointError> {
    let text = to_text(db);
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, msg: impl Into<String>) -> CheckpointError {
        CheckpointError::Parse { line: self.pos, msg: msg.into() }
    }

    /// The value after `field ` on the next line.
    fn field(&mut self, field: &str) -> Result<&'a str, CheckpointError> {
        let line = *self.lines.get(self.pos).ok_or_else(|| self.err(format!("missing `{field}`")))?;
        self.pos += 1;
        if line == field {
            return Ok("");
        }
        line.strip_prefix(field)
            .and_then(|r| r.strip_prefix(' '))
            .ok_or_else(|| self.err(format!("expected `{field}`")))
    }

    fn parse<T: std::str::FromStr>(&mut self, field: &str) -> Result<T, CheckpointError> {
        let v = self.field(field)?;
        v.trim().parse().map_err(|_| self.err(format!("bad value for `{field}`")))
    }

    fn peek_is(&self, prefix: &str) -> bool {
        self.lines.get(self.pos).is_some_and(|l| l.starts_with(prefix))
    }
}

fn parse_header<'a>(lines: &mut Lines<'a>) -> Result<(Metadata, String, usize), CheckpointError> {
    let first = lines.field(MAGIC).map_err(|_| CheckpointError::Version("not an orbit database".into()))?;
    if first.trim() != FORMAT_VERSION.to_string() {
        return Err(CheckpointError::Version(format!("version {} (supported: {FORMAT_VERSION})", first.trim())));
    }
    let group = lines.field("group")?.to_string();
    let field = lines.field("field")?.to_string();
    let radicand = if field == "Q" {
        None
    } else {
        let d = field
            .strip_prefix("Q(sqrt ")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| lines.err("bad field"))?;
        Some(d)
    };
    let symmetry_order: BigUint = lines.parse("symmetry_order")?;
    let ambient_dim = lines.parse("ambient_dim")?;
    let full_dim = lines.parse("full_dim")?;
    let vertex_count = lines.parse("vertices")?;
    let mut config = Vec::new();
    while lines.peek_is("config ") {
        let kv = lines.field("config")?;
        let (k, v) = kv.split_once('=').ok_or_else(|| lines.err("config entries are key=value"))?;
        config.push((k.to_string(), v.to_string()));
    }
    let count = lines.parse("orbits")?;
    Ok((Metadata { group, radicand, symmetry_order, ambient_dim, full_dim, vertex_count, config }, field, count))
}

/// Reads only the header.
pub fn read_metadata(path: &Path) -> Result<Metadata, CheckpointError> {
    let text = fs::read_to_string(path)?;
    let mut lines = Lines { lines: text.lines().collect(), pos: 0 };
    Ok(parse_header(&mut lines)?.0)
}

pub fn from_text<F: Scalar>(text: &str) -> Result<OrbitDatabase<F>, CheckpointError> {
    let mut lines = Lines { lines: text.lines().collect(), pos: 0 };
    let (meta, field, count) = parse_header(&mut lines)?;
    if meta.radicand != F::RADICAND {
        return Err(CheckpointError::Field { expected: radicand_text(F::RADICAND), found: field });
    }
    let mut db = OrbitDatabase::new(meta);
    for _ in 0..count {
        lines.field("orbit")?;
        let key = lines
            .field("key")?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<u32>, _>>()
            .map_err(|_| lines.err("bad key"))?;
        let normal = lines
            .field("normal")?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<F>, _>>()
            .map_err(|e| lines.err(e.to_string()))?;
        let rhs: F = lines.field("rhs")?.trim().parse().map_err(|e: crate::scalar::ScalarError| lines.err(e.to_string()))?;
        let stabilizer_order: BigUint = lines.parse("stabilizer")?;
        let orbit_size: BigUint = lines.parse("orbit_size")?;
        let rank = match lines.field("rank")?.trim() {
            "-" => None,
            r => Some(r.parse().map_err(|_| lines.err("bad rank"))?),
        };
        let status = match lines.field("status")?.trim() {
            "processed" => Status::Processed,
            "unprocessed" => Status::Unprocessed,
            _ => return Err(lines.err("bad status")),
        };
        lines.field("end")?;
        let record = OrbitRecord { key, normal, rhs, stabilizer_order, orbit_size, rank, status };
        if !db.insert_record(record) {
            return Err(CheckpointError::Invariant("duplicate orbit key".into()));
        }
    }
    if lines.pos != lines.lines.len() {
        return Err(lines.err("trailing content"));
    }
    db.validate().map_err(CheckpointError::Invariant)?;
    Ok(db)
}

pub fn load_checkpoint<F: Scalar>(path: &Path) -> Result<OrbitDatabase<F>, CheckpointError> {
    from_text(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, Sqrt5};

    fn meta() -> Metadata {
        Metadata {
            group: "T".into(),
            radicand: None,
            symmetry_order: BigUint::from(12u32),
            ambient_dim: 2,
            full_dim: 2,
            vertex_count: 6,
            config: vec![("seed".into(), "1".into())],
        }
    }

    fn record() -> OrbitRecord<Rational> {
        OrbitRecord {
            key: vec![0, 3],
            normal: vec![Rational::new(1, 2).unwrap(), Rational::from(-1)],
            rhs: Rational::from(1),
            stabilizer_order: BigUint::from(2u32),
            orbit_size: BigUint::from(6u32),
            rank: None,
            status: Status::Processed,
        }
    }

    #[test]
    fn round_trip_is_lossless_and_idempotent() {
        let mut db = OrbitDatabase::new(meta());
        db.insert_record(record());
        let text = to_text(&db);
        let back: OrbitDatabase<Rational> = from_text(&text).unwrap();
        assert_eq!(back, db);
        assert_eq!(to_text(&back), text);
    }

    #[test]
    fn empty_round_trip() {
        let db: OrbitDatabase<Rational> = OrbitDatabase::new(meta());
        let back: OrbitDatabase<Rational> = from_text(&to_text(&db)).unwrap();
        assert_eq!(back.meta, db.meta);
        assert!(back.is_empty());
    }

    #[test]
    fn tampered_orbit_size_is_rejected() {
        let mut db = OrbitDatabase::new(meta());
        db.insert_record(record());
        let text = to_text(&db).replace("orbit_size 6", "orbit_size 5");
        assert!(matches!(from_text::<Rational>(&text), Err(CheckpointError::Invariant(_))));
    }

    #[test]
    fn wrong_field_and_version() {
        let db: OrbitDatabase<Rational> = OrbitDatabase::new(meta());
        let text = to_text(&db);
        assert!(matches!(from_text::<Sqrt5>(&text), Err(CheckpointError::Field { .. })));
        let text = text.replace("grouphull-orbits 1", "grouphull-orbits 9");
        assert!(matches!(from_text::<Rational>(&text), Err(CheckpointError::Version(_))));
    }
}
