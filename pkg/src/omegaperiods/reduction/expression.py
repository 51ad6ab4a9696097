"""
Parser of the polynomials Q(t, T) given to the reduction, T standing for t^s.
Coefficients are complex literals such as 2, 0.5-1i or 3i; powers are written
with ^ or ** and take non negative integer exponents, e.g. `t^3 - 2*t*T + (0.5+1i)`.
"""
import ply.lex as lex
import ply.yacc as yacc

from omegaperiods.errors import InputError


def _add(p, q, sign=1):
    result = dict(p)
    for key, c in q.items():
        result[key] = result.get(key, 0j) + sign * c
    return result


def _mul(p, q):
    result = {}
    for (i1, m1), c1 in p.items():
        for (i2, m2), c2 in q.items():
            key = (i1 + i2, m1 + m2)
            result[key] = result.get(key, 0j) + c1 * c2
    return result


def _constant(c):
    return {(0, 0): complex(c)}


class QExpressionParser(object):
    tokens = ("NUMBER", "IMAG", "T", "Y", "PLUS", "MINUS", "TIMES", "POWER", "LPAREN", "RPAREN")

    t_IMAG = r"i"
    t_T = r"t"
    t_Y = r"T"
    t_PLUS = r"\+"
    t_MINUS = r"-"
    t_TIMES = r"\*"
    t_POWER = r"\^|\*\*"
    t_LPAREN = r"\("
    t_RPAREN = r"\)"
    t_ignore = " \t"

    def t_NUMBER(self, t):
        r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?i?"
        if t.value.endswith("i"):
            t.value = complex(0, float(t.value[:-1]))
        else:
            t.value = complex(float(t.value))
        return t

    def t_error(self, t):
        raise InputError("Unexpected character '{}' at position {}".format(t.value[0], t.lexpos))

    def p_expression_plus(self, p):
        "expression : expression PLUS term"
        p[0] = _add(p[1], p[3])

    def p_expression_minus(self, p):
        "expression : expression MINUS term"
        p[0] = _add(p[1], p[3], sign=-1)

    def p_expression_term(self, p):
        "expression : term"
        p[0] = p[1]

    def p_term_times(self, p):
        "term : term TIMES factor"
        p[0] = _mul(p[1], p[3])

    def p_term_factor(self, p):
        "term : factor"
        p[0] = p[1]

    def p_factor_sign(self, p):
        """factor : MINUS factor
                  | PLUS factor"""
        p[0] = _mul(_constant(-1 if p[1] == "-" else 1), p[2])

    def p_factor_power(self, p):
        "factor : power"
        p[0] = p[1]

    def p_power(self, p):
        "power : atom POWER NUMBER"
        exponent = p[3]
        if exponent.imag != 0 or exponent.real < 0 or exponent.real != int(exponent.real):
            raise InputError("Exponents must be non negative integers, got {}".format(exponent))
        result = _constant(1)
        for _ in range(int(exponent.real)):
            result = _mul(result, p[1])
        p[0] = result

    def p_power_atom(self, p):
        "power : atom"
        p[0] = p[1]

    def p_atom_number(self, p):
        "atom : NUMBER"
        p[0] = _constant(p[1])

    def p_atom_imag(self, p):
        "atom : IMAG"
        p[0] = _constant(1j)

    def p_atom_t(self, p):
        "atom : T"
        p[0] = {(1, 0): 1 + 0j}

    def p_atom_y(self, p):
        "atom : Y"
        p[0] = {(0, 1): 1 + 0j}

    def p_atom_group(self, p):
        "atom : LPAREN expression RPAREN"
        p[0] = p[2]

    def p_error(self, p):
        if p is None:
            raise InputError("Unexpected end of expression")
        raise InputError("Unexpected '{}' at position {}".format(p.value, p.lexpos))

    def __init__(self):
        self.lexer = lex.lex(module=self)
        self.parser = yacc.yacc(module=self, start="expression", write_tables=False, debug=False,
                                errorlog=yacc.NullLogger())

    def parse(self, text):
        """
        Parses an expression

        :param text: the expression
        :return: {(i, m): coefficient of t^i T^m}, without zero entries
        """
        if not str(text).strip():
            raise InputError("Empty expression")
        result = self.parser.parse(str(text), lexer=self.lexer)
        return {key: c for key, c in sorted(result.items()) if c != 0}


def parse_q(text):
    return QExpressionParser().parse(text)
