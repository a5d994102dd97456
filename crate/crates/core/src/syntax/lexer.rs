use super::{ParseError, ParseErrorKind, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// `ex!`
    ExUnique,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
    Define,
    EqSign,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    At,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::ExUnique => "`ex!`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Define => "`:=`".into(),
            Tok::EqSign => "`=`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::At => "`@`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut col = 1;
    let span = |s: usize, e: usize, line: usize, col: usize| SourceSpan { start: s, end: e, line, column: col };

    while i < bytes.len() {
        let c = src[i..].chars().next().unwrap();
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += c.len_utf8();
            col += 1;
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let start_col = col;
        let two = src.get(i..i + 2).unwrap_or("");
        let three = src.get(i..i + 3).unwrap_or("");
        let (tok, len) = if three == "<->" {
            (Tok::DArrow, 3)
        } else if two == "->" {
            (Tok::Arrow, 2)
        } else if two == ":=" {
            (Tok::Define, 2)
        } else if is_ident_start(c) {
            let mut j = i;
            while j < bytes.len() && is_ident_char(bytes[j] as char) {
                j += 1;
            }
            let word = &src[i..j];
            if word == "ex" && bytes.get(j) == Some(&b'!') {
                (Tok::ExUnique, 3)
            } else {
                (Tok::Ident(word.to_string()), j - i)
            }
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                ';' => Tok::Semi,
                '.' => Tok::Dot,
                '=' => Tok::EqSign,
                '!' => Tok::Bang,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                '@' => Tok::At,
                _ => {
                    return Err(ParseError {
                        kind: ParseErrorKind::Lexical,
                        message: format!("unexpected character `{c}`"),
                        span: span(start, start + c.len_utf8(), line, start_col),
                    })
                }
            };
            (t, c.len_utf8())
        };
        i += len;
        col += len;
        out.push(Token { tok, span: span(start, i, line, start_col) });
    }
    out.push(Token { tok: Tok::Eof, span: span(src.len(), src.len(), line, col) });
    Ok(out)
}
