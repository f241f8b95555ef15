//! Built-in worked examples with their known check outcomes.

use crate::session::{CliError, Options, Session};

pub struct Example {
    pub name: &'static str,
    pub about: &'static str,
    pub script: String,
    /// Verdicts of the script's yes/no checks, in order.
    pub expected: Vec<bool>,
}

fn conic(field: &str) -> String {
    format!(
        "ring R = subring({field}, [x, y], [a, b, c], [x^2, x*y, y^2]);
module M = ideal_module([a, b]);
closure cl = module_closure(M);
ideal I = (a^2, a*b, b*c, c^2);
submodule J = sum(I, sub(R, [a*c]));
check equal(closure(cl, I), closure(cl, J));
check member(a*c, closure(cl, I));
check member(a*c, I);
"
    )
}

const VERONESE: &str = "ring V = subring(Q, [x, y], [a, b, c, d], [x^4, x^3*y, x*y^3, y^4]);
module S = monomial_module([1, x^2*y^2]);
closure cl = module_closure(S);
";

pub fn all() -> Vec<Example> {
    vec![
        Example {
            name: "conic",
            about: "closure from the ideal (a, b) over k[a,b,c]/(ac - b^2), rationals",
            script: conic("Q"),
            expected: vec![true, true, false],
        },
        Example {
            name: "conic-f5",
            about: "the same computation over F_5",
            script: conic("Fp(5)"),
            expected: vec![true, true, false],
        },
        Example {
            name: "hypersurface",
            about: "closure from (x, u) over k[x,y,u,v]/(xy - uv)",
            script: "ring H = poly(Q, [x, y, u, v], degrevlex) / (x*y - u*v);
module M = ideal_module([x, u]);
closure cl = module_closure(M);
ideal I = (x^2, u^2);
check member(x*u, closure(cl, I));
check member(x*u, I);
"
            .into(),
            expected: vec![true, false],
        },
        Example {
            name: "veronese",
            about: "closure from R + R x^2 y^2 over k[x^4, x^3 y, x y^3, y^4]",
            script: format!(
                "{VERONESE}ideal A = (a);
check member(b^2, closure(cl, A));
check member(b^2, closure(trivial, A));
check member(b, closure(cl, A));
check faithful(cl);
"
            ),
            expected: vec![true, false, false, true],
        },
        Example {
            name: "obstruction",
            about: "integral closure of monomial ideals in k[x,y]",
            script: "ring P = poly(Q, [x, y], degrevlex);
check dietz_obstruction(integral_closure, [x, y], 3);
ideal N = (x^2, y^2);
check member(x*y, closure(integral_closure, N));
check faithful(integral_closure);
"
            .into(),
            expected: vec![true, true],
        },
        Example {
            name: "colon",
            about: "colon-capturing over the Veronese ring",
            script: format!(
                "{VERONESE}check colon_capturing(trivial, [a, d]);
check colon_capturing(cl, [a, d]);
check colon_capturing(cl, [a, d], strong_b);
check colon_capturing(cl, [a, d], strong_a(2, 1));
check dietz_obstruction(cl, [a, d], 2);
"
            ),
            expected: vec![false, true, true, true],
        },
        Example {
            name: "phantom",
            about: "parameter and containment modifications of the Veronese ring",
            script: format!(
                "{VERONESE}ideal A = (a);
modify T0 = root(V);
modify T1 = parameter(T0, cl, [a, d]);
check phantom(cl, T1);
check phantom(trivial, T1);
modify T2 = containment(T0, cl, A, b^2, 1);
check phantom(cl, T2);
show T1;
"
            ),
            expected: vec![true, false, true],
        },
    ]
}

pub struct ExampleResult {
    pub name: &'static str,
    pub verdicts: Vec<bool>,
    pub passed: bool,
    pub session: Session,
}

pub fn run(example: &Example, options: &Options) -> Result<ExampleResult, CliError> {
    let mut session = Session::new(options.clone());
    session.run(&example.script)?;
    let verdicts: Vec<bool> = session.log().iter().filter_map(|e| e.outcome.verdict).collect();
    Ok(ExampleResult {
        name: example.name,
        passed: verdicts == example.expected,
        verdicts,
        session,
    })
}
