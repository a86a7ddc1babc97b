"""Parser, pretty-printer round trip, validation, and every error code."""

import pytest

from coilcore import (CoilCoreInductor, NetlistError, StaircaseInductor,
                      format_netlist, parse_netlist, validate_circuit)
from coilcore.netlist import parse_value

GOLDEN = """\
# neuromorphic series loop
V1 in 0 PULSE(0 1 10m 1m 10m 3)
R1 in n1 10          ; series resistance
ML1 n1 n2 MLSTAIR(l0=2, delta=0.2)
C1 n2 0 2.474u
.tran 1e-5 0.07
.print v_out i l_eff
"""


class TestValues:
    @pytest.mark.parametrize("text,expected", [
        ("100", 100.0),
        ("3.5e-2", 0.035),
        ("10k", 1e4),
        ("2m", 2e-3),
        ("0.2u", 2e-7),
        ("5n", 5e-9),
        ("3p", 3e-12),
        ("1meg", 1e6),
        ("1MEG", 1e6),
        ("4K", 4e3),
        ("-2.5M", -2.5e-3),
        (".5", 0.5),
    ])
    def test_suffixes(self, text, expected):
        assert parse_value(text) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("text", ["", "abc", "1.2.3", "1q", "--5", "1e"])
    def test_rejects_garbage(self, text):
        with pytest.raises(NetlistError) as err:
            parse_value(text, line=3, column=7)
        assert err.value.code == "lexical"
        assert err.value.line == 3


class TestParse:
    def test_golden(self):
        doc = parse_netlist(GOLDEN)
        assert [e.kind for e in doc.elements] == ["V", "R", "MLSTAIR", "C"]
        v, r, ml, c = doc.elements
        assert v.waveform.kind == "pulse"
        assert v.waveform.params == (0.0, 1.0, 0.01, 0.001, 0.01, 3.0)
        assert r.value == 10.0
        assert ml.params == {"l0": 2.0, "delta": 0.2}
        assert c.value == pytest.approx(2.474e-6)
        assert doc.directives[0].values == (1e-5, 0.07)
        assert doc.directives[1].values == ("v_out", "i", "l_eff")

    def test_resistor_line(self):
        doc = parse_netlist("R1 in n1 0.5\n")
        e = doc.elements[0]
        assert (e.kind, e.node_a, e.node_b, e.value) == ("R", "in", "n1", 0.5)

    def test_mlcore_line(self):
        doc = parse_netlist("ML1 n1 n2 MLCORE(flux_scale=1e-3, sw=0.2u, m0=-0.964)\n")
        e = doc.elements[0]
        assert e.kind == "MLCORE"
        assert e.params["sw"] == pytest.approx(2e-7)
        assert e.params["m0"] == -0.964

    def test_tran_keyword_form(self):
        doc = parse_netlist(".tran step 1e-5 stop 0.2\n")
        assert doc.directives[0].values == (1e-5, 0.2)

    def test_comments_and_blank_lines(self):
        doc = parse_netlist("\n# full comment\nR1 a 0 1 ; tail\n   \n")
        assert len(doc.elements) == 1

    def test_crlf(self):
        doc = parse_netlist("R1 a 0 1\r\nC1 a 0 1u\r\n")
        assert len(doc.elements) == 2


class TestParseErrors:
    def check(self, text, code, line=None):
        with pytest.raises(NetlistError) as err:
            parse_netlist(text)
        assert err.value.code == code
        assert err.value.line is not None
        if line is not None:
            assert err.value.line == line
        return err.value

    def test_lexical_short_line(self):
        self.check("R1 a b\n", "lexical", line=1)

    def test_lexical_bad_number(self):
        self.check("R1 a b 1.2.3\n", "lexical", line=1)

    def test_lexical_trailing_tokens(self):
        self.check("R1 a b 1 2\n", "lexical", line=1)

    def test_unknown_kind_letter(self):
        self.check("X1 a b 5\n", "unknown-kind", line=1)

    def test_unknown_kind_model(self):
        self.check("Q1 a b FOO(bar=1)\n", "unknown-kind", line=1)

    def test_unknown_kind_m_without_model(self):
        self.check("ML1 a b 5\n", "unknown-kind", line=1)

    def test_bad_params_arity(self):
        self.check("V1 a 0 SIN(0 1)\n", "bad-params", line=1)

    def test_bad_params_unknown_key(self):
        self.check("ML1 a b MLSTAIR(l0=2, slope=0.2)\n", "bad-params", line=1)

    def test_bad_params_missing_key(self):
        self.check("ML1 a b MLCORE(flux_scale=1, sw=1)\n", "bad-params", line=1)

    def test_bad_params_waveform_on_resistor(self):
        self.check("R1 a b SIN(0 1 1)\n", "bad-params", line=1)

    def test_bad_params_m0_out_of_range(self):
        self.check("ML1 a b MLCORE(flux_scale=1, sw=1, m0=1)\n", "bad-params")

    def test_duplicate_name_case_insensitive(self):
        err = self.check("R1 a b 1\nr1 c d 2\n", "duplicate-name", line=2)
        assert "R1" in str(err) or "r1" in str(err)

    def test_unknown_directive(self):
        self.check(".frequency 10\n", "unknown-directive", line=1)

    def test_column_reported(self):
        with pytest.raises(NetlistError) as err:
            parse_netlist("R1 a b zz\n")
        assert err.value.column == 8


class TestRoundTrip:
    def test_signature_stable(self):
        doc = parse_netlist(GOLDEN)
        text = format_netlist(doc)
        doc2 = parse_netlist(text)
        assert doc.signature() == doc2.signature()
        assert format_netlist(doc2) == text

    def test_all_source_kinds(self):
        src = ("V1 a 0 SIN(0.5 2 100)\n"
               "R1 a b 1\nL1 b c 2\nC1 c 0 1u\n.tran 1m 1\n")
        doc = parse_netlist(src)
        assert parse_netlist(format_netlist(doc)).signature() == doc.signature()
        src2 = src.replace("SIN(0.5 2 100)", "STEP(0 1 0.5)")
        doc2 = parse_netlist(src2)
        assert parse_netlist(format_netlist(doc2)).signature() == doc2.signature()
        src3 = src.replace("SIN(0.5 2 100)", "12")
        doc3 = parse_netlist(src3)
        assert parse_netlist(format_netlist(doc3)).signature() == doc3.signature()


class TestValidate:
    def test_golden_compiles(self):
        circ = validate_circuit(parse_netlist(GOLDEN))
        assert circ.r == 10.0
        assert isinstance(circ.inductor, StaircaseInductor)
        assert circ.c == pytest.approx(2.474e-6)
        assert (circ.tran_step, circ.tran_stop) == (1e-5, 0.07)
        assert circ.outputs == ("time", "i", "v_out", "l_eff")

    def test_coilcore_element(self):
        src = ("V1 in 0 STEP(0 1 0)\nR1 in n1 100\n"
               "ML1 n1 n2 MLCORE(flux_scale=1e-3, sw=0.2u, m0=-0.964)\n"
               "C1 n2 0 1u\n.tran 1e-6 1m\n")
        circ = validate_circuit(parse_netlist(src))
        assert isinstance(circ.inductor, CoilCoreInductor)
        assert circ.inductor.params.sw_eff == pytest.approx(2e-7)

    def check(self, text, code):
        with pytest.raises(NetlistError) as err:
            validate_circuit(parse_netlist(text))
        assert err.value.code == code

    def test_two_capacitors_topology(self):
        self.check("V1 a 0 STEP(0 1 0)\nR1 a b 1\nL1 b c 1\nC1 c d 1u\n"
                   "C2 d 0 1u\n.tran 1m 1\n", "topology")

    def test_missing_ground(self):
        self.check("V1 a z 1\nR1 a b 1\nL1 b c 1\nC1 c z 1u\n.tran 1m 1\n",
                   "topology")

    def test_dangling_node(self):
        self.check("V1 a 0 1\nR1 a b 1\nL1 b c 1\nC1 d 0 1u\n.tran 1m 1\n",
                   "topology")

    def test_two_loops_not_connected(self):
        self.check("V1 a 0 1\nR1 a 0 1\nL1 b c 1\nC1 c b 1u\n.tran 1m 1\n",
                   "topology")

    def test_zero_capacitance(self):
        self.check("V1 a 0 1\nR1 a b 1\nL1 b c 1\nC1 c 0 0\n.tran 1m 1\n",
                   "bad-capacitance")

    def test_missing_tran(self):
        self.check("V1 a 0 1\nR1 a b 1\nL1 b c 1\nC1 c 0 1u\n", "missing-tran")

    def test_multiple_tran(self):
        self.check("V1 a 0 1\nR1 a b 1\nL1 b c 1\nC1 c 0 1u\n"
                   ".tran 1m 1\n.tran 1m 2\n", "multiple-tran")

    def test_bad_tran_values(self):
        self.check("V1 a 0 1\nR1 a b 1\nL1 b c 1\nC1 c 0 1u\n.tran 2 1\n",
                   "bad-tran")

    def test_two_inductive_elements(self):
        self.check("V1 a 0 1\nR1 a b 1\nL1 b c 1\n"
                   "ML1 c d MLSTAIR(l0=2, delta=0.2)\nC1 d 0 1u\n.tran 1m 1\n",
                   "multi-inductive")

    def test_negative_inductance(self):
        self.check("V1 a 0 1\nR1 a b 1\nL1 b c -1\nC1 c 0 1u\n.tran 1m 1\n",
                   "bad-params")

    def test_negative_resistance(self):
        self.check("V1 a 0 1\nR1 a b -1\nL1 b c 1\nC1 c 0 1u\n.tran 1m 1\n",
                   "bad-params")

    def test_no_source(self):
        self.check("R1 a 0 1\nR2 a b 1\nL1 b c 1\nC1 c 0 1u\n.tran 1m 1\n",
                   "topology")

    def test_self_loop_element(self):
        self.check("V1 a 0 1\nR1 a a 1\nL1 a c 1\nC1 c 0 1u\n.tran 1m 1\n",
                   "topology")
