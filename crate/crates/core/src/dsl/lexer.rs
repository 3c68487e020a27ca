#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Str(String),
    /// Punctuation; `(x)` is read as `⊗` and `^-1` is one token.
    Sym(&'static str),
    Bad(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Str(_) => "a string".into(),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Bad(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

const SYMS: &[&str] = &[
    "(x)", "⟨⟨", "⟩⟩", "^-1", "==", "=>", "->", "⊗", ";", ",", ":", "(", ")", "[", "]", "{", "}", "=", "@", "/", "<", ">",
];

#[derive(Clone)]
pub struct Lexer<'a> {
    pub src: &'a str,
    pub pos: usize,
    last_start: usize,
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0, last_start: 0 }
    }

    /// Skips whitespace and `#` comments.
    pub fn skip(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    /// The next token and its start offset, without consuming it.
    pub fn peek(&self) -> (Tok, usize) {
        let mut l = self.clone();
        let t = l.next();
        (t, l.last_start)
    }

    pub fn peek2(&self) -> Tok {
        let mut l = self.clone();
        l.next();
        l.next()
    }

    /// Offset where the next token starts.
    pub fn start(&self) -> usize {
        let mut l = self.clone();
        l.skip();
        l.pos
    }

    pub fn next(&mut self) -> Tok {
        self.skip();
        self.last_start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else { return Tok::Eof };
        if c.is_ascii_digit() {
            let n = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            if rest[n..].chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') {
                let m = rest.find(|c: char| !ident_char(c)).unwrap_or(rest.len());
                self.pos += m;
                return Tok::Ident(rest[..m].to_string());
            }
            self.pos += n;
            return match rest[..n].parse() {
                Ok(v) => Tok::Num(v),
                Err(_) => Tok::Bad(c),
            };
        }
        if c.is_alphabetic() || c == '_' {
            let m = rest.find(|c: char| !ident_char(c)).unwrap_or(rest.len());
            self.pos += m;
            return Tok::Ident(rest[..m].to_string());
        }
        if c == '"' {
            let mut out = String::new();
            let mut chars = rest.char_indices().skip(1);
            while let Some((i, ch)) = chars.next() {
                match ch {
                    '"' => {
                        self.pos += i + 1;
                        return Tok::Str(out);
                    }
                    '\\' => match chars.next() {
                        Some((_, e @ ('"' | '\\'))) => out.push(e),
                        Some((_, 'n')) => out.push('\n'),
                        _ => break,
                    },
                    '\n' => break,
                    _ => out.push(ch),
                }
            }
            self.pos += 1;
            return Tok::Bad('"');
        }
        for s in SYMS {
            if rest.starts_with(s) {
                self.pos += s.len();
                return Tok::Sym(if *s == "(x)" { "⊗" } else { s });
            }
        }
        self.pos += c.len_utf8();
        Tok::Bad(c)
    }

    /// Line and column (1-based, counted in characters) of a byte offset.
    pub fn line_col(&self, offset: usize) -> (usize, usize) {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().unwrap_or("").chars().count() + 1;
        (line, col)
    }

    /// Consumes a JSON object starting at the next token. Returns the raw
    /// text, or None if the braces do not balance.
    pub fn raw_json(&mut self) -> Option<&'a str> {
        self.skip();
        let rest = &self.src[self.pos..];
        if !rest.starts_with('{') {
            return None;
        }
        let (mut depth, mut in_str, mut esc) = (0usize, false, false);
        for (i, c) in rest.char_indices() {
            if in_str {
                match c {
                    _ if esc => esc = false,
                    '\\' => esc = true,
                    '"' => in_str = false,
                    _ => {}
                }
                continue;
            }
            match c {
                '"' => in_str = true,
                '{' | '[' => depth += 1,
                '}' | ']' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += i + 1;
                        return Some(&rest[..=i]);
                    }
                }
                _ => {}
            }
        }
        None
    }
}
