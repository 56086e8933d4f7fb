use std::collections::HashMap;
use std::f64::consts::LN_10;
use std::io::{BufRead, Write};

use super::{Entry, NGramModel, BOS, EOS, UNK, UNK_ID};
use crate::error::{Error, Result};

/// Stand-in for log10(0), as written by common toolkits.
const LOG_ZERO: f64 = -99.0;

fn to_log10(ln: f64) -> f64 {
    if ln == f64::NEG_INFINITY {
        LOG_ZERO
    } else {
        ln / LN_10
    }
}

fn from_log10(l: f64) -> f64 {
    if l <= LOG_ZERO {
        f64::NEG_INFINITY
    } else {
        l * LN_10
    }
}

impl NGramModel {
    /// Write the model in ARPA format. Output is a pure function of the
    /// model: entries are sorted by symbol id.
    pub fn write_arpa<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "\\data\\")?;
        for k in 1..=self.order {
            writeln!(out, "ngram {}={}", k, self.grams[k - 1].len())?;
        }
        for k in 1..=self.order {
            writeln!(out)?;
            writeln!(out, "\\{k}-grams:")?;
            for (g, e) in self.sorted_grams(k) {
                write!(out, "{}\t", to_log10(e.logprob))?;
                for (i, &id) in g.iter().enumerate() {
                    if i > 0 {
                        out.write_all(b" ")?;
                    }
                    out.write_all(self.symbol(id).as_bytes())?;
                }
                if k < self.order {
                    write!(out, "\t{}", to_log10(e.backoff))?;
                }
                writeln!(out)?;
            }
        }
        writeln!(out)?;
        writeln!(out, "\\end\\")?;
        Ok(())
    }

    pub fn read_arpa<R: BufRead>(reader: R) -> Result<Self> {
        let mut counts: Vec<usize> = Vec::new();
        let mut sections: Vec<Vec<(usize, String)>> = Vec::new();
        let mut current: Option<usize> = None;
        let mut in_data = false;
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            if t == "\\data\\" {
                in_data = true;
                continue;
            }
            if t == "\\end\\" {
                break;
            }
            if let Some(k) = t.strip_prefix('\\').and_then(|r| r.strip_suffix("-grams:")) {
                let k: usize = k.parse().map_err(|_| Error::parse(n + 1, "bad section header"))?;
                if k != sections.len() + 1 {
                    return Err(Error::parse(n + 1, "sections out of order"));
                }
                sections.push(Vec::new());
                current = Some(k);
                in_data = false;
                continue;
            }
            if in_data {
                let spec = t
                    .strip_prefix("ngram ")
                    .and_then(|r| r.split_once('='))
                    .ok_or_else(|| Error::parse(n + 1, "bad ngram count line"))?;
                counts.push(spec.1.trim().parse().map_err(|_| Error::parse(n + 1, "bad count"))?);
                continue;
            }
            match current {
                Some(k) => sections[k - 1].push((n + 1, t.to_string())),
                None => return Err(Error::parse(n + 1, "content outside any section")),
            }
        }
        let order = sections.len();
        if order == 0 || counts.len() != order {
            return Err(Error::parse(0, "missing \\data\\ header or n-gram sections"));
        }

        let has_unk = sections[0].iter().any(|(_, l)| l.split_whitespace().nth(1) == Some(UNK));
        let mut model = NGramModel::empty(order, has_unk);
        let mut parsed: Vec<HashMap<Vec<u32>, Entry>> = vec![HashMap::new(); order];
        for (k, lines) in sections.iter().enumerate() {
            let k = k + 1;
            if lines.len() != counts[k - 1] {
                return Err(Error::parse(0, format!("{k}-gram count does not match header")));
            }
            for (n, l) in lines {
                let fields: Vec<&str> = l.split_whitespace().collect();
                let expected = if k < order { [k + 1, k + 2] } else { [k + 1, k + 1] };
                if !expected.contains(&fields.len()) {
                    return Err(Error::parse(*n, "wrong number of fields"));
                }
                let bad = || Error::parse(*n, "bad number");
                let logprob = from_log10(fields[0].parse().map_err(|_| bad())?);
                let backoff = match fields.get(k + 1) {
                    Some(b) => from_log10(b.parse().map_err(|_| bad())?),
                    None => 0.0,
                };
                let mut g = Vec::with_capacity(k);
                for s in &fields[1..=k] {
                    let id = if k == 1 {
                        model.intern(s)
                    } else {
                        model.id(s).ok_or_else(|| Error::parse(*n, format!("symbol {s} missing from 1-grams")))?
                    };
                    g.push(id);
                }
                parsed[k - 1].insert(
                    g,
                    Entry {
                        logprob,
                        backoff,
                        context: false,
                    },
                );
            }
        }
        for s in [BOS, EOS] {
            if !parsed[0].contains_key(&vec![model.id(s).expect("reserved")]) {
                return Err(Error::parse(0, format!("{s} missing from 1-grams")));
            }
        }
        if !has_unk {
            parsed[0].remove(&vec![UNK_ID]);
        }
        model.grams = parsed;
        model.mark_contexts();
        Ok(model)
    }
}
