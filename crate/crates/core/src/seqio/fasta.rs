use super::{Base, SeqError, Sequence, Strand};

pub const FASTA_LINE_WIDTH: usize = 60;

struct Pending {
    id: String,
    description: String,
    residues: Vec<Base>,
}

impl Pending {
    fn finish(self) -> Result<Sequence, SeqError> {
        if self.residues.is_empty() {
            return Err(SeqError::EmptyRecord { id: self.id });
        }
        Sequence::new(self.id, self.description, self.residues, Strand::Unspecified)
    }
}

/// Parses one or more '>'-headed records. Accepts `\n` and `\r\n` line endings
/// and arbitrary line wrapping; blank lines are ignored.
pub fn parse_fasta(text: &str) -> Result<Vec<Sequence>, SeqError> {
    let mut records = Vec::new();
    let mut current: Option<Pending> = None;

    for (line_idx, raw) in text.split('\n').enumerate() {
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            if let Some(done) = current.take() {
                records.push(done.finish()?);
            }
            let header = header.trim();
            let (id, description) = match header.split_once(char::is_whitespace) {
                Some((id, rest)) => (id.to_string(), rest.trim().to_string()),
                None => (header.to_string(), String::new()),
            };
            current = Some(Pending { id, description, residues: Vec::new() });
            continue;
        }
        let Some(rec) = current.as_mut() else {
            return Err(SeqError::OrphanSequence { line: line_idx + 1 });
        };
        rec.residues.reserve(line.len());
        for &b in line.as_bytes() {
            match Base::from_byte(b) {
                Some(base) => rec.residues.push(base),
                None => {
                    return Err(SeqError::InvalidCharacter {
                        position: rec.residues.len() + 1,
                        line: line_idx + 1,
                        byte: b,
                    })
                }
            }
        }
    }

    match current {
        Some(done) => records.push(done.finish()?),
        None => return Err(SeqError::EmptyInput),
    }
    Ok(records)
}

/// Serializes records with `width`-column residue lines.
pub fn write_fasta(records: &[Sequence], width: usize) -> String {
    let width = width.max(1);
    let mut out = String::new();
    for rec in records {
        out.push('>');
        out.push_str(rec.id());
        if !rec.description().is_empty() {
            out.push(' ');
            out.push_str(rec.description());
        }
        out.push('\n');
        for chunk in rec.residues().chunks(width) {
            out.extend(chunk.iter().map(|b| b.to_char()));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_record() {
        let recs = parse_fasta(">x\nATGC\n").unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].id(), "x");
        assert_eq!(recs[0].to_string_residues(), "ATGC");
    }

    #[test]
    fn wrapped_multi_record() {
        let recs = parse_fasta(">x\nAT\nGC\n>y\nTTTT\n").unwrap();
        assert_eq!(recs.iter().map(Sequence::len).collect::<Vec<_>>(), vec![4, 4]);
        assert_eq!(recs[0].to_string_residues(), "ATGC");
    }

    #[test]
    fn crlf_and_description() {
        let recs = parse_fasta(">x some words here\r\nac\r\ngt\r\n").unwrap();
        assert_eq!(recs[0].description(), "some words here");
        assert_eq!(recs[0].to_string_residues(), "ACGT");
    }

    #[test]
    fn invalid_character_position() {
        assert_eq!(parse_fasta(">x\nATQC\n"), Err(SeqError::InvalidCharacter { position: 3, line: 2, byte: b'Q' }));
        // position counts across wrapped lines
        assert!(matches!(parse_fasta(">x\nAT\nGX\n"), Err(SeqError::InvalidCharacter { position: 4, line: 3, .. })));
    }

    #[test]
    fn error_cases() {
        assert_eq!(parse_fasta(""), Err(SeqError::EmptyInput));
        assert_eq!(parse_fasta("\n\n"), Err(SeqError::EmptyInput));
        assert_eq!(parse_fasta(">x\n>y\nA\n"), Err(SeqError::EmptyRecord { id: "x".into() }));
        assert_eq!(parse_fasta("ACGT\n>x\nA\n"), Err(SeqError::OrphanSequence { line: 1 }));
    }

    #[test]
    fn writes_sixty_columns() {
        let s = Sequence::from_residues("r", &"A".repeat(130)).unwrap();
        let text = write_fasta(&[s], FASTA_LINE_WIDTH);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, vec![">r", &"A".repeat(60), &"A".repeat(60), &"A".repeat(10)]);
    }
}
