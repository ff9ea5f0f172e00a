//! LaTeX from the crate's own plain-text renderings.
//!
//! The text forms use a small fixed vocabulary: infix `+ - * / ^ =`,
//! parentheses, function calls, coefficient references `a(...)`, primes
//! `y''`, and `sum(k=lo..hi, body)`. That grammar is translated directly.

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    Num(String),
    Op(String),
    Space,
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Tok(Tok),
    Group(Vec<Node>),
}

fn tokenize(s: &str) -> Vec<Tok> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            while i < cs.len() && cs[i].is_whitespace() {
                i += 1;
            }
            out.push(Tok::Space);
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_' || cs[i] == '\'') {
                i += 1;
            }
            out.push(Tok::Word(cs[st..i].iter().collect()));
        } else {
            let two: String = cs[i..(i + 2).min(cs.len())].iter().collect();
            if matches!(two.as_str(), ">=" | "<=" | "..") {
                out.push(Tok::Op(two));
                i += 2;
            } else {
                out.push(Tok::Op(c.to_string()));
                i += 1;
            }
        }
    }
    out
}

fn nest(toks: &[Tok], i: &mut usize) -> Vec<Node> {
    let mut out = Vec::new();
    while *i < toks.len() {
        let t = &toks[*i];
        *i += 1;
        match t {
            Tok::Op(o) if o == "(" => out.push(Node::Group(nest(toks, i))),
            Tok::Op(o) if o == ")" => return out,
            _ => out.push(Node::Tok(t.clone())),
        }
    }
    out
}

/// Splits at top-level commas.
fn split_commas(ns: &[Node]) -> Vec<&[Node]> {
    let mut parts = Vec::new();
    let mut st = 0;
    for (k, n) in ns.iter().enumerate() {
        if *n == Node::Tok(Tok::Op(",".into())) {
            parts.push(&ns[st..k]);
            st = k + 1;
        }
    }
    parts.push(&ns[st..]);
    parts
}

fn trim(ns: &[Node]) -> &[Node] {
    let mut a = 0;
    let mut b = ns.len();
    while a < b && ns[a] == Node::Tok(Tok::Space) {
        a += 1;
    }
    while b > a && ns[b - 1] == Node::Tok(Tok::Space) {
        b -= 1;
    }
    &ns[a..b]
}

fn function_name(w: &str) -> String {
    match w {
        "exp" | "log" | "sin" | "cos" | "tan" | "sec" | "csc" | "cot" | "sinh" | "cosh" | "tanh" | "arcsin"
        | "arctan" => format!("\\{}", w),
        _ => format!("\\operatorname{{{}}}", w),
    }
}

fn word(w: &str) -> String {
    let primes = w.chars().rev().take_while(|&c| c == '\'').count();
    let base = &w[..w.len() - primes];
    let body = if base.chars().count() > 1 { format!("\\mathrm{{{}}}", base) } else { base.to_string() };
    format!("{}{}", body, "'".repeat(primes))
}

fn call(name: &str, args: &[Node]) -> String {
    let parts = split_commas(args);
    match name {
        "a" => format!("a_{{{}}}", render(args)),
        "O" => format!("O\\left({}\\right)", render(args)),
        "sqrt" => format!("\\sqrt{{{}}}", render(args)),
        "sum" if parts.len() == 2 => {
            let range = trim(parts[0]);
            let body = render(trim(parts[1]));
            let dots = range.iter().position(|n| *n == Node::Tok(Tok::Op("..".into())));
            match dots {
                Some(d) => format!("\\sum_{{{}}}^{{{}}} {}", render(&range[..d]), render(&range[d + 1..]), body),
                None => format!("\\sum_{{{}}} {}", render(range), body),
            }
        }
        _ => format!("{}\\left({}\\right)", function_name(name), render(args)),
    }
}

/// One operand starting at `ns[*i]`, including any trailing powers. With
/// `bare`, a parenthesized operand loses its parentheses.
fn operand(ns: &[Node], i: &mut usize, bare: bool) -> String {
    while *i < ns.len() && ns[*i] == Node::Tok(Tok::Space) {
        *i += 1;
    }
    let Some(n) = ns.get(*i) else { return String::new() };
    *i += 1;
    let mut s = match n {
        Node::Tok(Tok::Word(w)) => match ns.get(*i) {
            Some(Node::Group(g)) => {
                *i += 1;
                call(w, g)
            }
            _ => word(w),
        },
        Node::Tok(Tok::Num(d)) => d.clone(),
        Node::Tok(Tok::Op(o)) if o == "-" => format!("-{}", operand(ns, i, false)),
        Node::Tok(t) => tok(t),
        Node::Group(g) if bare && ns.get(*i) != Some(&Node::Tok(Tok::Op("^".into()))) => render(g),
        Node::Group(g) => format!("\\left({}\\right)", render(g)),
    };
    while ns.get(*i) == Some(&Node::Tok(Tok::Op("^".into()))) {
        *i += 1;
        let e = operand(ns, i, true);
        s = format!("{}^{{{}}}", s, e);
    }
    s
}

fn tok(t: &Tok) -> String {
    match t {
        Tok::Word(w) => word(w),
        Tok::Num(d) => d.clone(),
        Tok::Space => " ".into(),
        Tok::Op(o) => match o.as_str() {
            ">=" => "\\geq".into(),
            "<=" => "\\leq".into(),
            "*" => "\\,".into(),
            "," => ",\\quad".into(),
            other => other.into(),
        },
    }
}

fn render(ns: &[Node]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < ns.len() {
        match &ns[i] {
            Node::Tok(Tok::Op(o)) if o == "/" => {
                i += 1;
                let num = out.pop().unwrap_or_default();
                let num = num.strip_prefix("\\left(").and_then(|s| s.strip_suffix("\\right)")).unwrap_or(&num);
                let den = operand(ns, &mut i, true);
                let (sign, num) = match num.strip_prefix('-') {
                    Some(rest) => ("-", rest),
                    None => ("", num),
                };
                out.push(format!("{}\\frac{{{}}}{{{}}}", sign, num, den));
            }
            Node::Tok(Tok::Op(o)) if o != "-" || !out.is_empty() => {
                out.push(tok(&Tok::Op(o.clone())));
                i += 1;
            }
            Node::Tok(Tok::Space) => {
                out.push(" ".into());
                i += 1;
            }
            _ => out.push(operand(ns, &mut i, false)),
        }
    }
    out.concat()
}

/// LaTeX for a plain-text rendering produced by this crate.
pub fn from_text(s: &str) -> String {
    let toks = tokenize(s);
    let mut i = 0;
    render(&nest(&toks, &mut i))
}
