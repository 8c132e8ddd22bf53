//! Concrete wording of conclusions.

fn simple(label: &str) -> bool {
    let mut cs = label.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn group(label: &str) -> String {
    if simple(label) {
        label.to_string()
    } else {
        format!("({label})")
    }
}

pub(crate) fn spectrum(label: &str) -> String {
    if label.contains(' ') {
        format!("({label})")
    } else {
        label.to_string()
    }
}

/// `X^{hK}`.
pub(crate) fn fixed(x: &str, k: &str) -> String {
    format!("{}^{{h{}}}", spectrum(x), group(k))
}

pub(crate) fn phi(x: &str, a: &str) -> String {
    format!(
        "Φ is a weak equivalence for {} with trivial action of {a}",
        spectrum(x)
    )
}

pub(crate) fn colim(x: &str, a: &str) -> String {
    format!(
        "{} ≃ colim_N {}^{{h({}/N)}}",
        fixed(x, a),
        spectrum(x),
        group(a)
    )
}

/// `X^{hA} ≃ X^{h(A/U)}` with the quotient named.
pub(crate) fn fixed_points(x: &str, a: &str, quotient: &str) -> String {
    format!("{} ≃ {}", fixed(x, a), fixed(x, quotient))
}

/// `X^{hA} ≃ X^{h(A/V)}` for a bound variable `V`.
pub(crate) fn fixed_points_generic(x: &str, a: &str, v: &str) -> String {
    format!("{} ≃ {}^{{h({}/{v})}}", fixed(x, a), spectrum(x), group(a))
}

pub(crate) fn unit(x: &str, u: &str) -> String {
    format!("{} ≃ {}", spectrum(x), fixed(x, u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wording() {
        assert_eq!(fixed("K(1,3)", "Z_2 × Z/3"), "K(1,3)^{h(Z_2 × Z/3)}");
        assert_eq!(fixed("K(1,3)", "Z_2"), "K(1,3)^{hZ_2}");
        assert_eq!(unit("HQ", "Z/6"), "HQ ≃ HQ^{h(Z/6)}");
        assert_eq!(fixed("HQ ∨ K(1,2)", "Z_3"), "(HQ ∨ K(1,2))^{hZ_3}");
        assert_eq!(
            fixed_points("K(1,3)", "Z_2 × Z/3", "Z/3"),
            "K(1,3)^{h(Z_2 × Z/3)} ≃ K(1,3)^{h(Z/3)}"
        );
    }
}
