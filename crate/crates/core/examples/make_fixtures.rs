//! Regenerates the bundled fixtures in `crates/core/fixtures/`.
//!
//!     cargo run -p helix-core --example make_fixtures

use std::fmt::Write as _;
use std::path::Path;

use helix_core::golden::engineered_sequence;
use helix_core::seqio::{write_fasta, Base, Sequence, Strand, FASTA_LINE_WIDTH};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GENOME_LENGTH: usize = 168_903;

fn random_bases(seed: u64, len: usize) -> Vec<Base> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| Base::ATGC[rng.random_range(0..4)]).collect()
}

fn genbank(accession: &str, definition: &str, residues: &[Base]) -> String {
    let len = residues.len();
    let mut out = String::new();
    writeln!(out, "LOCUS       {accession:<16}{len:>11} bp    DNA     linear   SYN 01-JAN-2000").unwrap();
    writeln!(out, "DEFINITION  {definition}").unwrap();
    writeln!(out, "ACCESSION   {accession}").unwrap();
    writeln!(out, "VERSION     {accession}.0").unwrap();
    writeln!(out, "KEYWORDS    synthetic.").unwrap();
    writeln!(out, "SOURCE      synthetic construct").unwrap();
    writeln!(out, "FEATURES             Location/Qualifiers").unwrap();
    writeln!(out, "     source          1..{len}").unwrap();
    writeln!(out, "                     /note=\"uniform random bases, ChaCha8 seed 158101\"").unwrap();
    writeln!(out, "ORIGIN      ").unwrap();
    for (line_no, line) in residues.chunks(60).enumerate() {
        write!(out, "{:>9}", line_no * 60 + 1).unwrap();
        for group in line.chunks(10) {
            out.push(' ');
            out.extend(group.iter().map(|b| b.to_char().to_ascii_lowercase()));
        }
        out.push('\n');
    }
    out.push_str("//\n");
    out
}

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).unwrap();

    let genome = random_bases(158_101, GENOME_LENGTH);
    let gb = genbank(
        "AF158101",
        "Synthetic stand-in with the length and coordinate layout of the bacteriophage T4 genome record; random bases, not the real sequence.",
        &genome,
    );
    std::fs::write(dir.join("AF158101.synthetic.gb"), gb).unwrap();

    let logic =
        Sequence::new("logic-4050", "synthetic 4050-base logic fixture", random_bases(4050, 4050), Strand::Plus)
            .unwrap();
    std::fs::write(dir.join("logic_4050.fa"), write_fasta(&[logic], FASTA_LINE_WIDTH)).unwrap();

    std::fs::write(dir.join("engineered_7x7.fa"), write_fasta(&[engineered_sequence()], FASTA_LINE_WIDTH)).unwrap();
}
