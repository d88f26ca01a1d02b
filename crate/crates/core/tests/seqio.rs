use std::io::{Read, Write};
use std::net::TcpListener;
use std::thread;
use std::time::Duration;

use helix_core::seqio::{
    extract_region, fetch_record, parse_fasta, parse_genbank, reverse_complement, write_fasta, Base, FetchError,
    FetchOptions, Orientation, Sequence, Strand, FASTA_LINE_WIDTH,
};
use proptest::prelude::*;

const FIXTURE: &str = include_str!("../fixtures/AF158101.synthetic.gb");

/// Serves exactly one request with `response` after an optional delay.
fn serve_once(response: Vec<u8>, delay: Duration) -> (String, thread::JoinHandle<String>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let handle = thread::spawn(move || {
        let (mut stream, _) = listener.accept().unwrap();
        let mut request = Vec::new();
        let mut buf = [0u8; 1024];
        while !request.windows(4).any(|w| w == b"\r\n\r\n") {
            let n = stream.read(&mut buf).unwrap();
            if n == 0 {
                break;
            }
            request.extend_from_slice(&buf[..n]);
        }
        thread::sleep(delay);
        let _ = stream.write_all(&response);
        String::from_utf8_lossy(&request).into_owned()
    });
    (format!("http://{addr}/efetch?id={{accession}}&rettype=gb"), handle)
}

fn http_response(status: &str, body: &[u8]) -> Vec<u8> {
    let mut out =
        format!("HTTP/1.1 {status}\r\nContent-Length: {}\r\nConnection: close\r\n\r\n", body.len()).into_bytes();
    out.extend_from_slice(body);
    out
}

fn short_options() -> FetchOptions {
    FetchOptions { timeout: Duration::from_secs(5) }
}

#[test]
fn fixture_parses_with_accession_and_full_length() {
    let rec = parse_genbank(FIXTURE).unwrap();
    assert_eq!(rec.accession, "AF158101");
    assert_eq!(rec.sequence.len(), 168_903);
    assert_eq!(rec.declared_length, 168_903);
}

#[test]
fn fetch_returns_stub_body_verbatim() {
    let (template, server) = serve_once(http_response("200 OK", FIXTURE.as_bytes()), Duration::ZERO);
    let body = fetch_record("AF158101", &template, &short_options()).unwrap();
    assert_eq!(body, FIXTURE.as_bytes());
    let request = server.join().unwrap();
    assert!(request.starts_with("GET /efetch?id=AF158101&rettype=gb "), "{request}");
    assert_eq!(parse_genbank(std::str::from_utf8(&body).unwrap()).unwrap().accession, "AF158101");
}

#[test]
fn fetch_reports_non_success_status() {
    let (template, server) = serve_once(http_response("404 Not Found", b"no such id"), Duration::ZERO);
    let err = fetch_record("NOPE", &template, &short_options()).unwrap_err();
    assert_eq!(err, FetchError::NonSuccessStatus(404));
    server.join().unwrap();
}

#[test]
fn fetch_reports_transport_error_on_closed_port() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let template = format!("http://127.0.0.1:{port}/{{accession}}");
    let err = fetch_record("AF158101", &template, &short_options()).unwrap_err();
    assert!(matches!(err, FetchError::Transport(_)), "{err:?}");
}

#[test]
fn fetch_times_out_on_silent_server() {
    let (template, _server) = serve_once(http_response("200 OK", b""), Duration::from_secs(3));
    let options = FetchOptions { timeout: Duration::from_millis(300) };
    let err = fetch_record("AF158101", &template, &options).unwrap_err();
    assert_eq!(err, FetchError::Timeout(Duration::from_millis(300)));
}

#[test]
fn fetch_rejects_template_without_placeholder() {
    let err = fetch_record("AF158101", "http://127.0.0.1:1/", &short_options()).unwrap_err();
    assert!(matches!(err, FetchError::InvalidTemplate(_)));
}

fn bases(max: usize) -> impl Strategy<Value = Vec<Base>> {
    prop::collection::vec(prop::sample::select(vec![Base::A, Base::C, Base::G, Base::T, Base::N]), 1..max)
}

proptest! {
    #[test]
    fn reverse_complement_is_an_involution(residues in bases(400)) {
        let seq = Sequence::new("s", "", residues, Strand::Plus).unwrap();
        let twice = reverse_complement(&reverse_complement(&seq));
        prop_assert_eq!(twice.residues(), seq.residues());
        prop_assert_eq!(twice.strand(), Strand::Plus);
    }

    #[test]
    fn extracted_region_has_inclusive_length(residues in bases(400), a in 0usize..400, b in 0usize..400, minus in any::<bool>()) {
        let seq = Sequence::new("s", "", residues, Strand::Plus).unwrap();
        let (start, end) = (a.min(b) % seq.len() + 1, a.max(b) % seq.len() + 1);
        prop_assume!(start <= end);
        let orientation = if minus { Orientation::Minus } else { Orientation::Plus };
        let region = extract_region(&seq, start, end, orientation).unwrap();
        prop_assert_eq!(region.len(), end - start + 1);
        let plus = extract_region(&seq, start, end, Orientation::Plus).unwrap();
        if minus {
            let rc = reverse_complement(&plus);
            prop_assert_eq!(rc.residues(), region.residues());
        } else {
            prop_assert_eq!(&seq.residues()[start - 1..end], region.residues());
        }
    }

    #[test]
    fn fasta_round_trip_preserves_records(records in prop::collection::vec(bases(300), 1..5), width in 1usize..100) {
        let seqs: Vec<Sequence> = records
            .into_iter()
            .enumerate()
            .map(|(i, r)| Sequence::new(format!("rec{i}"), "some description", r, Strand::Unspecified).unwrap())
            .collect();
        let parsed = parse_fasta(&write_fasta(&seqs, width)).unwrap();
        prop_assert_eq!(parsed.len(), seqs.len());
        for (p, s) in parsed.iter().zip(&seqs) {
            prop_assert_eq!(p.id(), s.id());
            prop_assert_eq!(p.residues(), s.residues());
        }
    }
}

#[test]
fn genbank_residues_survive_fasta_round_trip() {
    let rec = parse_genbank(FIXTURE).unwrap();
    let parsed = parse_fasta(&write_fasta(std::slice::from_ref(&rec.sequence), FASTA_LINE_WIDTH)).unwrap();
    assert_eq!(parsed[0].residues(), rec.sequence.residues());
}
