//! CoNLL-U reading and writing.
//!
//! Multiword-token ranges (`3-4`) and empty nodes (`3.1`) are dropped and
//! counted. A malformed sentence is reported as an error item and skipped;
//! reading continues with the next sentence.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use wordorder_core::sentence::{Attributes, Head, Sentence, Token, TokenId, Violation};

#[derive(Debug, thiserror::Error)]
pub enum ConlluError {
    #[error("line {line}: expected 10 columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: bad token id `{value}`")]
    BadId { line: usize, value: String },
    #[error("line {line}: bad head `{value}`")]
    BadHead { line: usize, value: String },
    #[error("sentence ending at line {line} is not a tree: {}", join_violations(.violations))]
    InvalidTree {
        line: usize,
        violations: Vec<Violation>,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Counters for material the reader dropped.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct ReadStats {
    pub multiword_ranges: usize,
    pub empty_nodes: usize,
    pub errors: usize,
}

pub struct ConlluReader<R> {
    input: R,
    line_no: usize,
    buf: String,
    stats: ReadStats,
    done: bool,
}

/// Lazily parses sentences from `input`.
pub fn parse_conllu<R: BufRead>(input: R) -> ConlluReader<R> {
    ConlluReader {
        input,
        line_no: 0,
        buf: String::new(),
        stats: ReadStats::default(),
        done: false,
    }
}

impl<R: BufRead> ConlluReader<R> {
    pub fn stats(&self) -> ReadStats {
        self.stats
    }

    fn next_line(&mut self) -> io::Result<Option<&str>> {
        self.buf.clear();
        if self.input.read_line(&mut self.buf)? == 0 {
            return Ok(None);
        }
        self.line_no += 1;
        Ok(Some(self.buf.trim_end_matches(['\n', '\r'])))
    }

    fn read_sentence(&mut self) -> Option<Result<Sentence, ConlluError>> {
        let mut meta = Attributes::new();
        let mut tokens = Vec::new();
        let mut error = None;
        let mut started = false;
        loop {
            let line_no = self.line_no + 1;
            let line = match self.next_line() {
                Ok(Some(l)) => l.to_owned(),
                Ok(None) => {
                    self.done = true;
                    break;
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            };
            if line.trim().is_empty() {
                if started {
                    break;
                }
                continue;
            }
            started = true;
            if error.is_some() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                meta.push(parse_comment(comment));
                continue;
            }
            match self.parse_token(&line, line_no) {
                Ok(Some(t)) => tokens.push(t),
                Ok(None) => {}
                Err(e) => error = Some(e),
            }
        }
        if !started {
            return None;
        }
        if let Some(e) = error {
            self.stats.errors += 1;
            return Some(Err(e));
        }
        let sentence = Sentence::with_meta(tokens, meta);
        let violations = sentence.validate();
        if !violations.is_empty() {
            self.stats.errors += 1;
            return Some(Err(ConlluError::InvalidTree {
                line: self.line_no,
                violations,
            }));
        }
        Some(Ok(sentence))
    }

    fn parse_token(&mut self, line: &str, line_no: usize) -> Result<Option<Token>, ConlluError> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::ColumnCount {
                line: line_no,
                found: cols.len(),
            });
        }
        if cols[0].contains('-') {
            self.stats.multiword_ranges += 1;
            return Ok(None);
        }
        if cols[0].contains('.') {
            self.stats.empty_nodes += 1;
            return Ok(None);
        }
        let id: u32 = cols[0].parse().ok().filter(|&i| i > 0).ok_or_else(|| ConlluError::BadId {
            line: line_no,
            value: cols[0].into(),
        })?;
        let head = match cols[6].parse::<u32>() {
            Ok(0) => Head::Root,
            Ok(h) => Head::Token(TokenId(h)),
            Err(_) => {
                return Err(ConlluError::BadHead {
                    line: line_no,
                    value: cols[6].into(),
                })
            }
        };
        Ok(Some(Token {
            id: TokenId(id),
            form: cols[1].into(),
            lemma: cols[2].into(),
            upos: cols[3].into(),
            xpos: optional(cols[4]),
            feats: parse_attributes(cols[5]),
            head,
            deprel: cols[7].into(),
            deps: optional(cols[8]),
            misc: parse_attributes(cols[9]),
        }))
    }
}

impl<R: BufRead> Iterator for ConlluReader<R> {
    type Item = Result<Sentence, ConlluError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        self.read_sentence()
    }
}

fn optional(col: &str) -> Option<String> {
    (col != "_").then(|| col.to_owned())
}

fn parse_attributes(col: &str) -> Attributes {
    if col == "_" {
        return Attributes::new();
    }
    col.split('|')
        .map(|kv| match kv.split_once('=') {
            Some((k, v)) => (k.to_owned(), Some(v.to_owned())),
            None => (kv.to_owned(), None),
        })
        .collect()
}

fn parse_comment(comment: &str) -> (String, Option<String>) {
    let comment = comment.trim();
    match comment.split_once('=') {
        Some((k, v)) => (k.trim().to_owned(), Some(v.trim().to_owned())),
        None => (comment.to_owned(), None),
    }
}

fn write_attributes(out: &mut String, attrs: &Attributes) {
    if attrs.is_empty() {
        out.push('_');
        return;
    }
    for (i, (k, v)) in attrs.iter().enumerate() {
        if i > 0 {
            out.push('|');
        }
        out.push_str(k);
        if let Some(v) = v {
            out.push('=');
            out.push_str(v);
        }
    }
}

/// Appends one sentence in CoNLL-U, numbering tokens 1..n in surface
/// order and remapping heads accordingly.
pub fn format_sentence(out: &mut String, sentence: &Sentence) {
    for (k, v) in &sentence.meta {
        match v {
            Some(v) => {
                let _ = writeln!(out, "# {k} = {v}");
            }
            None => {
                let _ = writeln!(out, "# {k}");
            }
        }
    }
    let mut by_id: Vec<(TokenId, usize)> = sentence
        .tokens()
        .iter()
        .enumerate()
        .map(|(i, t)| (t.id, i + 1))
        .collect();
    by_id.sort_unstable();
    let new_id = |id: TokenId| {
        by_id
            .binary_search_by(|p| p.0.cmp(&id))
            .map(|i| by_id[i].1)
            .unwrap_or(0)
    };
    for (i, t) in sentence.tokens().iter().enumerate() {
        let head = match t.head {
            Head::Root => 0,
            Head::Token(h) => new_id(h),
        };
        let _ = write!(
            out,
            "{}\t{}\t{}\t{}\t{}\t",
            i + 1,
            t.form,
            t.lemma,
            t.upos,
            t.xpos.as_deref().unwrap_or("_")
        );
        write_attributes(out, &t.feats);
        let _ = write!(
            out,
            "\t{head}\t{}\t{}\t",
            t.deprel,
            t.deps.as_deref().unwrap_or("_")
        );
        write_attributes(out, &t.misc);
        out.push('\n');
    }
    out.push('\n');
}

pub fn write_sentence<W: Write>(w: &mut W, sentence: &Sentence) -> io::Result<()> {
    let mut s = String::new();
    format_sentence(&mut s, sentence);
    w.write_all(s.as_bytes())
}

pub fn serialize_conllu<'a, W, I>(w: &mut W, sentences: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a Sentence>,
{
    for s in sentences {
        write_sentence(w, s)?;
    }
    Ok(())
}
