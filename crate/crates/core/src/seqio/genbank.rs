use super::{Base, SeqError, Sequence, Strand};

/// A single-entry GenBank flat file. Only LOCUS, ACCESSION, DEFINITION and
/// ORIGIN are interpreted; FEATURES is carried as raw text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenBankRecord {
    pub accession: String,
    pub definition: String,
    pub sequence: Sequence,
    pub declared_length: usize,
    pub features: String,
}

#[derive(PartialEq)]
enum Section {
    Header,
    Definition,
    Features,
    Origin,
    Other,
}

fn locus_length(line: &str) -> Result<usize, SeqError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    tokens
        .iter()
        .position(|t| *t == "bp" || *t == "aa")
        .and_then(|i| i.checked_sub(1))
        .and_then(|i| tokens[i].parse().ok())
        .ok_or_else(|| SeqError::MalformedLocus(line.to_string()))
}

pub fn parse_genbank(text: &str) -> Result<GenBankRecord, SeqError> {
    let mut declared: Option<usize> = None;
    let mut accession: Option<String> = None;
    let mut definition = String::new();
    let mut features = String::new();
    let mut residues: Vec<Base> = Vec::new();
    let mut saw_origin = false;
    let mut terminated = false;
    let mut section = Section::Header;

    for (line_idx, raw) in text.split('\n').enumerate() {
        let line = raw.trim_end_matches('\r');
        if terminated {
            if line.trim().is_empty() {
                continue;
            }
            return Err(SeqError::MultipleRecords { line: line_idx + 1 });
        }
        if line.starts_with("//") {
            terminated = true;
            continue;
        }
        let is_keyword = line.chars().next().is_some_and(|c| c.is_ascii_uppercase());
        if is_keyword {
            let keyword = line.split_whitespace().next().unwrap_or("");
            let rest = line[keyword.len()..].trim();
            section = match keyword {
                "LOCUS" => {
                    declared = Some(locus_length(line)?);
                    Section::Header
                }
                "ACCESSION" => {
                    accession = rest.split_whitespace().next().map(str::to_string);
                    Section::Header
                }
                "DEFINITION" => {
                    definition = rest.to_string();
                    Section::Definition
                }
                "FEATURES" => {
                    features.push_str(line);
                    features.push('\n');
                    Section::Features
                }
                "ORIGIN" => {
                    saw_origin = true;
                    Section::Origin
                }
                _ => Section::Other,
            };
            continue;
        }
        match section {
            Section::Definition => {
                let cont = line.trim();
                if !cont.is_empty() {
                    definition.push(' ');
                    definition.push_str(cont);
                }
            }
            Section::Features => {
                features.push_str(line);
                features.push('\n');
            }
            Section::Origin => {
                for &b in line.as_bytes() {
                    if b.is_ascii_digit() || b.is_ascii_whitespace() {
                        continue;
                    }
                    match Base::from_byte(b) {
                        Some(base) => residues.push(base),
                        None => {
                            return Err(SeqError::InvalidCharacter {
                                position: residues.len() + 1,
                                line: line_idx + 1,
                                byte: b,
                            })
                        }
                    }
                }
            }
            Section::Header | Section::Other => {}
        }
    }

    let declared_length = declared.ok_or(SeqError::MissingSection("LOCUS"))?;
    let accession = accession.ok_or(SeqError::MissingSection("ACCESSION"))?;
    if !saw_origin {
        return Err(SeqError::MissingSection("ORIGIN"));
    }
    if !terminated {
        return Err(SeqError::MissingSection("//"));
    }
    if declared_length != residues.len() {
        return Err(SeqError::LengthMismatch { declared: declared_length, parsed: residues.len() });
    }
    let definition = definition.trim_end_matches('.').to_string();
    let sequence = Sequence::new(accession.clone(), definition.clone(), residues, Strand::Plus)?;
    Ok(GenBankRecord { accession, definition, sequence, declared_length, features })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(locus_len: usize, origin: &str) -> String {
        format!(
            "LOCUS       TEST0001                 {locus_len} bp    DNA     linear   PHG 01-JAN-2000\n\
             DEFINITION  Test record\n            spanning two lines.\n\
             ACCESSION   TEST0001\n\
             VERSION     TEST0001.1\n\
             FEATURES             Location/Qualifiers\n\
             \x20    source          1..{locus_len}\n\
             ORIGIN      \n{origin}\n//\n"
        )
    }

    #[test]
    fn minimal_record() {
        let rec = parse_genbank(&record(8, "        1 atgcatgc")).unwrap();
        assert_eq!(rec.accession, "TEST0001");
        assert_eq!(rec.sequence.to_string_residues(), "ATGCATGC");
        assert_eq!(rec.declared_length, 8);
        assert_eq!(rec.definition, "Test record spanning two lines");
        assert!(rec.features.contains("source          1..8"));
    }

    #[test]
    fn grouped_origin_lines() {
        let origin = "        1 aaaaaaaaaa cccccccccc\n       21 gggg";
        let rec = parse_genbank(&record(24, origin)).unwrap();
        assert_eq!(rec.sequence.len(), 24);
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            parse_genbank(&record(10, "        1 atgcatgc")),
            Err(SeqError::LengthMismatch { declared: 10, parsed: 8 })
        );
    }

    #[test]
    fn missing_sections() {
        let text = record(8, "        1 atgcatgc");
        assert_eq!(
            parse_genbank(&text.replace("ACCESSION   TEST0001\n", "")),
            Err(SeqError::MissingSection("ACCESSION"))
        );
        assert_eq!(parse_genbank(&text.replace("//\n", "")), Err(SeqError::MissingSection("//")));
        assert_eq!(parse_genbank(""), Err(SeqError::MissingSection("LOCUS")));
    }

    #[test]
    fn invalid_origin_character() {
        assert!(matches!(
            parse_genbank(&record(8, "        1 atgcxtgc")),
            Err(SeqError::InvalidCharacter { position: 5, byte: b'x', .. })
        ));
    }

    #[test]
    fn rejects_second_entry() {
        let text = record(8, "        1 atgcatgc");
        let doubled = format!("{text}{text}");
        assert!(matches!(parse_genbank(&doubled), Err(SeqError::MultipleRecords { .. })));
    }
}
