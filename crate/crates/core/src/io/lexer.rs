use std::borrow::Cow;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub text: String,
    /// 1-based character column.
    pub col: usize,
    /// Byte offset of the token in its line.
    pub start: usize,
    pub quoted: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Line {
    pub no: usize,
    pub raw: String,
    pub tokens: Vec<Token>,
}

impl Line {
    pub fn error(&self, tok: usize, msg: impl Into<String>) -> Error {
        let col = self.tokens.get(tok).map_or_else(|| self.raw.chars().count() + 1, |t| t.col);
        Error::parse(self.no, col, msg)
    }

    pub fn key(&self) -> &str {
        &self.tokens[0].text
    }

    /// Raw text from token `tok` to the end of the line.
    pub fn rest(&self, tok: usize) -> (&str, usize) {
        match self.tokens.get(tok) {
            Some(t) => (&self.raw[t.start..], t.col),
            None => ("", self.raw.chars().count() + 1),
        }
    }

    pub fn words(&self, from: usize) -> impl Iterator<Item = (usize, &str)> + '_ {
        self.tokens.iter().enumerate().skip(from).map(|(i, t)| (i, t.text.as_str()))
    }
}

fn is_special(c: char) -> bool {
    c == '[' || c == ']'
}

/// Splits a document into its non-blank, non-comment lines.
pub(crate) fn lines(text: &str) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        out.push(Line { no, raw: raw.to_string(), tokens: tokenize(raw, no)? });
    }
    Ok(out)
}

fn tokenize(raw: &str, no: usize) -> Result<Vec<Token>> {
    let col = |byte: usize| raw[..byte].chars().count() + 1;
    let mut tokens = Vec::new();
    let mut it = raw.char_indices().peekable();
    while let Some(&(start, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if is_special(c) {
            it.next();
            tokens.push(Token { text: c.to_string(), col: col(start), start, quoted: false });
            continue;
        }
        let mut text = String::new();
        while let Some(&(b, c)) = it.peek() {
            if c.is_whitespace() || is_special(c) {
                break;
            }
            it.next();
            if c != '"' {
                text.push(c);
                continue;
            }
            let mut closed = false;
            while let Some((_, c)) = it.next() {
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => match it.next() {
                        Some((_, e)) => text.push(e),
                        None => break,
                    },
                    _ => text.push(c),
                }
            }
            if !closed {
                return Err(Error::parse(no, col(b), "unterminated quoted name"));
            }
        }
        tokens.push(Token { text, col: col(start), start, quoted: c == '"' });
    }
    Ok(tokens)
}

/// A name as it must be written so that the tokenizer reads it back.
pub(crate) fn quote(name: &str) -> Cow<'_, str> {
    let plain = !name.is_empty()
        && !name.starts_with('#')
        && !name.contains(|c: char| c.is_whitespace() || c == '"' || c == '\\' || is_special(c));
    if plain {
        return Cow::Borrowed(name);
    }
    let mut s = String::with_capacity(name.len() + 2);
    s.push('"');
    for c in name.chars() {
        if c == '"' || c == '\\' {
            s.push('\\');
        }
        s.push(c);
    }
    s.push('"');
    Cow::Owned(s)
}

/// Cursor over the lines of a document.
pub(crate) struct Reader {
    lines: Vec<Line>,
    pos: usize,
    last_line: usize,
}

impl Reader {
    pub fn new(text: &str) -> Result<Self> {
        let last_line = text.lines().count() + 1;
        Ok(Reader { lines: lines(text)?, pos: 0, last_line })
    }

    pub fn peek_key(&self) -> Option<&str> {
        self.lines.get(self.pos).map(|l| l.key())
    }

    pub fn next_line(&mut self) -> Option<&Line> {
        let l = self.lines.get(self.pos)?;
        self.pos += 1;
        Some(l)
    }

    /// Consumes the next line, which must start with `key`.
    pub fn expect(&mut self, key: &str) -> Result<&Line> {
        match self.lines.get(self.pos) {
            Some(l) if l.key() == key => {
                self.pos += 1;
                Ok(l)
            }
            Some(l) => Err(l.error(0, format!("expected `{key}`, found `{}`", l.key()))),
            None => Err(Error::parse(self.last_line, 1, format!("expected `{key}`, found end of input"))),
        }
    }

    /// Consumes the header line `kind v1`.
    pub fn header(&mut self, kind: &str) -> Result<()> {
        let l = self.expect(kind)?;
        match l.tokens.get(1) {
            Some(t) if t.text == super::FORMAT_VERSION && l.tokens.len() == 2 => Ok(()),
            Some(t) if l.tokens.len() == 2 => {
                Err(l.error(1, format!("unsupported format version `{}`, expected `{}`", t.text, super::FORMAT_VERSION)))
            }
            _ => Err(l.error(1, format!("expected `{kind} {}`", super::FORMAT_VERSION))),
        }
    }

    pub fn finish(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            Some(l) => Err(l.error(0, format!("unexpected `{}`", l.key()))),
            None => Ok(()),
        }
    }

    pub fn first_key(&self) -> Option<&Line> {
        self.lines.first()
    }
}
