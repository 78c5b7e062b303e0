use std::io::{self, BufRead, Write};

use super::{Outcome, PacketRecord};

pub const LEDGER_HEADER: &str = "gen_time,service_start,departure,outcome";

fn field(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

/// Writes the ledger as CSV; absent times are empty fields.
pub fn write_ledger_csv<W: Write>(ledger: &[PacketRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{LEDGER_HEADER}")?;
    for p in ledger {
        writeln!(
            out,
            "{:?},{},{},{}",
            p.generation_time,
            field(p.service_start),
            field(p.departure_time),
            p.outcome.as_str()
        )?;
    }
    out.flush()
}

fn bad(line: usize, what: impl std::fmt::Display) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, format!("ledger line {line}: {what}"))
}

/// Reads a ledger written by [`write_ledger_csv`].
pub fn read_ledger_csv<R: BufRead>(input: R) -> io::Result<Vec<PacketRecord>> {
    let mut lines = input.lines();
    match lines.next().transpose()? {
        Some(h) if h.trim() == LEDGER_HEADER => {}
        _ => return Err(bad(1, format!("expected header `{LEDGER_HEADER}`"))),
    }
    let mut ledger = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        let n = k + 2;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.trim().split(',').collect();
        let [gen, start, dep, outcome] = cols[..] else {
            return Err(bad(n, "expected 4 fields"));
        };
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(n, e));
        let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
        let outcome = match outcome {
            "delivered" => Outcome::Delivered,
            "dropped_blocked" => Outcome::DroppedBlocked,
            "dropped_replaced" => Outcome::DroppedReplaced,
            other => return Err(bad(n, format!("unknown outcome `{other}`"))),
        };
        ledger.push(PacketRecord {
            generation_time: num(gen)?,
            service_start: opt(start)?,
            departure_time: opt(dep)?,
            outcome,
        });
    }
    Ok(ledger)
}
