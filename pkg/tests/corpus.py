"""Named example systems shared by the test suite.

Each entry maps a name to (a_text, b_text, expected_tag).
"""

CORPUS = {
    "p5_unit": ("1", "1", "P5"),
    "p5_double": ("2", "2", "P5"),
    "p5_split": ("exp(-u)", "exp(u)", "P5"),
    "p4_exp": ("exp(u)", "exp(u)", "P4"),
    "p4_sq": ("u^2", "u^2", "P4"),
    "p4_cube": ("u^3", "u^3", "P4"),
    "p4_quint": ("u^5", "u^5", "P4"),
    "p4_invcube": ("u^(-3)", "u^(-3)", "P4"),
    "p4_atan": ("exp(arctan(sinh(u)))", "exp(arctan(sinh(u)))", "P4"),
    "p4_pconst": ("exp(2*u)/x", "x", "P4"),
    "p3_rat": ("1/(1+u^2)", "1/(1+u^2)", "P3"),
    "p3_shift": ("1/(1+(u+0.3)^2)", "1/(1+(u+0.3)^2)", "P3"),
    "p3_quartic": ("1/(1+u^4)", "1/(1+u^4)", "P3"),
    "p2_expxu": ("exp(x*u)", "exp(x*u)", "P2"),
    "p2_swapped": ("exp(-x*u)", "exp(x*u)", "P2"),
    "p1_exp": ("exp(u-x)", "exp(u+x)", "P1"),
    "p1_ux": ("u/x", "u*x", "P1"),
}

# constant M1 values implied by F(u) = u^m for the power-law members
POWER_M1 = {"p4_sq": 1 - 4 / 2.0 ** 2, "p4_cube": 1 - 4 / 3.0 ** 2,
            "p4_quint": 1 - 4 / 5.0 ** 2, "p4_invcube": 1 - 4 / 3.0 ** 2}
