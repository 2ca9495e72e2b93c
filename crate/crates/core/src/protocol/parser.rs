use super::ast::{Axis, BasisSpec, Metric, Program, Source, Statement, StatementKind};
use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseError, Position};
use crate::states::{BellKind, Spin};
use crate::Label;

/// Parses script text into a program. Reports the first syntax error in
/// reading order.
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(source)?;
    Parser { tokens, at: 0 }.program()
}

/// Like [`parse`] but accepts raw bytes; invalid UTF-8 is a parse error at
/// the first bad byte.
pub fn parse_bytes(bytes: &[u8]) -> Result<Program, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(s) => parse(s),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).expect("valid prefix");
            let line = valid.matches('\n').count() + 1;
            let column = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            let bad = bytes[e.valid_up_to()];
            Err(ParseError::at(
                Position { line, column },
                "invalid UTF-8",
                format!("\\x{bad:02x}"),
            ))
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if t.kind != TokenKind::Eof {
            self.at += 1;
        }
        t
    }

    fn error(&self, tok: &Token, expected: &str) -> ParseError {
        let (found, pos) = if tok.kind == TokenKind::Eof {
            ("end of input".to_owned(), self.end_of_last_token())
        } else {
            (format!("{:?}", tok.text), tok.pos)
        };
        ParseError::at(pos, format!("expected {expected}, found {found}"), tok.text.clone())
    }

    /// Position just past the last real token, so a truncated statement is
    /// reported on its own line rather than after trailing blank lines.
    fn end_of_last_token(&self) -> Position {
        match self.tokens.iter().rev().find(|t| t.kind != TokenKind::Eof) {
            Some(t) => Position {
                line: t.pos.line,
                column: t.pos.column + t.text.chars().count(),
            },
            None => self.tokens.last().map_or_else(Position::default, |t| t.pos),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, ParseError> {
        let t = self.next();
        if t.kind == kind {
            Ok(t)
        } else {
            Err(self.error(&t, what))
        }
    }

    fn keyword(&mut self, options: &[&str]) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.kind {
            TokenKind::Ident(s) if options.contains(&s.as_str()) => Ok((s.clone(), t)),
            _ => {
                let what = options
                    .iter()
                    .map(|o| format!("'{o}'"))
                    .collect::<Vec<_>>()
                    .join(" or ");
                Err(self.error(&t, &what))
            }
        }
    }

    fn program(mut self) -> Result<Program, ParseError> {
        let mut statements = Vec::new();
        while self.peek().kind != TokenKind::Eof {
            statements.push(self.statement()?);
        }
        Ok(Program { statements })
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let (kw, tok) = self.keyword(&["prepare", "measure", "report"])?;
        let kind = match kw.as_str() {
            "prepare" => StatementKind::Prepare(self.source()?),
            "measure" => {
                let basis = self.basis()?;
                self.keyword(&["on"])?;
                let targets = self.targets()?;
                StatementKind::Measure { basis, targets }
            }
            _ => StatementKind::Report(self.metric()?),
        };
        self.expect(TokenKind::Semicolon, "';'")?;
        Ok(Statement { kind, pos: tok.pos })
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let t = self.next();
        match t.kind {
            TokenKind::Number {
                integer: Some(n), ..
            } if n >= 1 && n <= Label::MAX as u64 => Ok(n as Label),
            _ => Err(self.error(&t, "a particle label (positive integer)")),
        }
    }

    fn label_list(&mut self) -> Result<Vec<Label>, ParseError> {
        let mut labels = vec![self.label()?];
        while self.peek().kind == TokenKind::Comma {
            self.next();
            labels.push(self.label()?);
        }
        Ok(labels)
    }

    fn pair(&mut self) -> Result<(Label, Label), ParseError> {
        self.expect(TokenKind::LParen, "'('")?;
        let a = self.label()?;
        self.expect(TokenKind::Comma, "','")?;
        let b = self.label()?;
        self.expect(TokenKind::RParen, "')'")?;
        Ok((a, b))
    }

    fn source(&mut self) -> Result<Source, ParseError> {
        let (kw, _) = self.keyword(&["singlet", "bell", "ket"])?;
        match kw.as_str() {
            "singlet" => {
                let (a, b) = self.pair()?;
                Ok(Source::Singlet(a, b))
            }
            "bell" => {
                let kind = self.bell_kind()?;
                let (a, b) = self.pair()?;
                Ok(Source::Bell(kind, a, b))
            }
            _ => {
                let mut spins = Vec::new();
                loop {
                    match self.peek().kind {
                        TokenKind::Plus => spins.push(Spin::Plus),
                        TokenKind::Minus => spins.push(Spin::Minus),
                        _ => break,
                    }
                    self.next();
                }
                if spins.is_empty() {
                    let t = self.peek().clone();
                    return Err(self.error(&t, "a spin pattern of '+' and '-'"));
                }
                let labels = if self.peek().kind == TokenKind::LParen {
                    self.next();
                    let l = self.label_list()?;
                    self.expect(TokenKind::RParen, "')'")?;
                    Some(l)
                } else {
                    None
                };
                Ok(Source::Ket { spins, labels })
            }
        }
    }

    fn bell_kind(&mut self) -> Result<BellKind, ParseError> {
        let (family, _) = self.keyword(&["psi", "phi"])?;
        let sign = self.next();
        let plus = match sign.kind {
            TokenKind::Plus => true,
            TokenKind::Minus => false,
            _ => return Err(self.error(&sign, "'+' or '-'")),
        };
        Ok(match (family.as_str(), plus) {
            ("psi", true) => BellKind::PsiPlus,
            ("psi", false) => BellKind::PsiMinus,
            ("phi", true) => BellKind::PhiPlus,
            _ => BellKind::PhiMinus,
        })
    }

    fn basis(&mut self) -> Result<BasisSpec, ParseError> {
        let (kw, _) = self.keyword(&["spin", "bell"])?;
        if kw == "bell" {
            return Ok(BasisSpec::Bell);
        }
        self.expect(TokenKind::LParen, "'('")?;
        let axis = self.axis()?;
        self.expect(TokenKind::RParen, "')'")?;
        Ok(BasisSpec::Spin(axis))
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let sign = match self.peek().kind {
            TokenKind::Plus => {
                self.next();
                1.0
            }
            TokenKind::Minus => {
                self.next();
                -1.0
            }
            _ => 1.0,
        };
        let t = self.next();
        match t.kind {
            TokenKind::Number { value, .. } => Ok(sign * value),
            _ => Err(self.error(&t, "a number")),
        }
    }

    fn axis(&mut self) -> Result<Axis, ParseError> {
        if self.peek().kind == TokenKind::LParen {
            self.next();
            let x = self.number()?;
            self.expect(TokenKind::Comma, "','")?;
            let y = self.number()?;
            self.expect(TokenKind::Comma, "','")?;
            let z = self.number()?;
            self.expect(TokenKind::RParen, "')'")?;
            return Ok(Axis::Vector(x, y, z));
        }
        let t = self.peek().clone();
        let (kw, _) = self
            .keyword(&["x", "y", "z"])
            .map_err(|_| self.error(&t, "an axis: x, y, z or (x, y, z)"))?;
        Ok(match kw.as_str() {
            "x" => Axis::X,
            "y" => Axis::Y,
            _ => Axis::Z,
        })
    }

    fn targets(&mut self) -> Result<Vec<Label>, ParseError> {
        if self.peek().kind == TokenKind::LParen {
            let (a, b) = self.pair()?;
            Ok(vec![a, b])
        } else {
            Ok(vec![self.label()?])
        }
    }

    fn bipartition(&mut self) -> Result<(Vec<Label>, Vec<Label>), ParseError> {
        self.expect(TokenKind::LParen, "'('")?;
        let a = self.label_list()?;
        self.expect(TokenKind::Bar, "'|'")?;
        let b = self.label_list()?;
        self.expect(TokenKind::RParen, "')'")?;
        Ok((a, b))
    }

    fn metric(&mut self) -> Result<Metric, ParseError> {
        let (kw, _) = self.keyword(&[
            "probs",
            "rdm",
            "schmidt",
            "entropy",
            "concurrence",
            "correlator",
        ])?;
        Ok(match kw.as_str() {
            "probs" => Metric::Probs,
            "rdm" => {
                self.expect(TokenKind::LParen, "'('")?;
                let l = self.label_list()?;
                self.expect(TokenKind::RParen, "')'")?;
                Metric::Rdm(l)
            }
            "schmidt" => {
                let (a, b) = self.bipartition()?;
                Metric::Schmidt(a, b)
            }
            "entropy" => {
                let (a, b) = self.bipartition()?;
                Metric::Entropy(a, b)
            }
            "concurrence" => {
                let (p, q) = self.pair()?;
                Metric::Concurrence(p, q)
            }
            _ => {
                self.expect(TokenKind::LParen, "'('")?;
                let p = self.label()?;
                self.expect(TokenKind::Comma, "','")?;
                let a = self.axis()?;
                self.expect(TokenKind::Comma, "','")?;
                let q = self.label()?;
                self.expect(TokenKind::Comma, "','")?;
                let b = self.axis()?;
                self.expect(TokenKind::RParen, "')'")?;
                Metric::Correlator(p, a, q, b)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn experiment_scripts() {
        let p = parse(
            "prepare singlet(1,2); prepare singlet(3,4); measure spin(z) on 2; measure spin(z) on 3;",
        )
        .unwrap();
        assert_eq!(p.statements.len(), 4);
        assert_eq!(
            p.statements[2].kind,
            StatementKind::Measure {
                basis: BasisSpec::Spin(Axis::Z),
                targets: vec![2]
            }
        );

        let p = parse(
            "prepare singlet(1,2); prepare singlet(3,4); measure bell on (2,3); report entropy(1|4);",
        )
        .unwrap();
        assert_eq!(p.statements.len(), 4);
        assert_eq!(
            p.statements[3].kind,
            StatementKind::Report(Metric::Entropy(vec![1], vec![4]))
        );
    }

    #[test]
    fn all_forms() {
        let src = "prepare bell phi-(5,6);\nprepare ket +-+ (7,8,9);\nprepare ket -;\n\
                   measure spin((0.5, -1, +2e0)) on 5;\nreport probs;\nreport rdm(5,6);\n\
                   report schmidt(5|6,7);\nreport concurrence(5,6);\nreport correlator(5,x,6,(1,0,0));";
        let p = parse(src).unwrap();
        assert_eq!(p.statements.len(), 9);
        assert_eq!(p.statements[0].kind, StatementKind::Prepare(Source::Bell(BellKind::PhiMinus, 5, 6)));
        assert_eq!(
            p.statements[3].kind,
            StatementKind::Measure {
                basis: BasisSpec::Spin(Axis::Vector(0.5, -1.0, 2.0)),
                targets: vec![5]
            }
        );
        assert_eq!(p.statements[8].pos, Position { line: 9, column: 1 });
    }

    #[test]
    fn syntax_errors_report_first_position() {
        let e = parse("measure").unwrap_err();
        assert_eq!((e.line, e.column), (1, 8));
        let e = parse("prepare singlet(1,2)\nprepare singlet(3,4);").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("';'"));
        let e = parse("prepare singlet(0,2);").unwrap_err();
        assert_eq!(e.column, 17);
        let e = parse("measure spin(w) on 1;").unwrap_err();
        assert!(e.message.contains("axis"));
        assert!(parse("prepare ket (1,2);").is_err());
        assert!(parse("prepare singlet(1.5,2);").is_err());
        assert!(parse("report probs").is_err());
    }

    #[test]
    fn invalid_utf8() {
        let e = parse_bytes(b"prepare\n ab\xffc").unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
    }

    #[test]
    fn empty_and_comment_only() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("# nothing here\n\n").unwrap().is_empty());
    }

    #[test]
    fn pretty_print_reparses() {
        let src = "prepare bell psi+(1,2); prepare ket -+; measure spin((0.1, 0.2, -0.3)) on 1; \
                   measure bell on (1,2); report correlator(1,(1e-7, 0, 1),2,y); report schmidt(1|2);";
        let p = parse(src).unwrap();
        let q = parse(&p.to_string()).unwrap();
        assert_eq!(p.kinds(), q.kinds());
    }
}
