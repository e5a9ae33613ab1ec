import unittest
from fractions import Fraction

import pytest

from fundgroup.domain.errors import ParseError
from fundgroup.features.algebras.logic import build, model_dual_system
from fundgroup.features.algebras.models import AlgebraKind
from fundgroup.features.bratteli.logic import dims
from fundgroup.features.monomial.logic import antidiagonal, contains
from fundgroup.infrastructure.loaders.algebra_file import parse_model_text
from fundgroup.infrastructure.loaders.bratteli_file import parse_bratteli_text
from fundgroup.infrastructure.loaders.factory import loader_factory
from fundgroup.infrastructure.loaders.literals import parse_group, parse_matrix, parse_module, parse_monomial, parse_vector, split_top
from fundgroup.kernel.system.paths import list_samples


class TestLiterals(unittest.TestCase):
    def test_split_top_respects_brackets(self):
        self.assertEqual(split_top("[1;2] default=0; kind=custom", ";"), ["[1;2] default=0", "kind=custom"])
        with self.assertRaises(ParseError):
            split_top("[1,2", ",")

    def test_matrix_forms_agree(self):
        self.assertEqual(parse_matrix("[[0,3/2],[2/3,0]]"), parse_matrix("[0,3/2;2/3,0]"))
        with self.assertRaises(ParseError):
            parse_matrix("[1,2;3]")

    def test_monomial_forms_agree(self):
        dense = parse_monomial("[[0,3/2],[2/3,0]]")
        self.assertEqual(dense, parse_monomial("perm=(1 2) diag=3/2,2/3"))
        self.assertEqual(dense, antidiagonal([Fraction(3, 2), Fraction(2, 3)]))

    def test_non_monomial_literal(self):
        with self.assertRaises(ParseError):
            parse_monomial("[[1,1],[0,1]]")

    def test_named_groups(self):
        self.assertEqual(len(parse_group("S3").permutations), 6)
        self.assertEqual(len(parse_group("I4").permutations), 1)
        with self.assertRaises(ParseError):
            parse_group("perm=(1 2) diag=1,1; perm=e diag=1,1,1")

    def test_vector_needs_entries(self):
        self.assertEqual(len(parse_vector("[1, sqrt(2), 3/4]")), 3)
        with self.assertRaises(ParseError):
            parse_vector("[]")


def test_module_literal():
    module = parse_module("[1,0;0,1] default=0 except 2:inf + [1,1] default=inf")
    assert module.n == 2
    with pytest.raises(ParseError):
        parse_module("[1,0] default=0 + [1] default=0")


def test_bundled_samples_are_listed():
    assert {"m2m3.alg", "prime.alg", "small.brt", "simpleaf.brt"} <= set(list_samples())


@pytest.mark.parametrize("name", ["m2m3.alg", "prime.alg", "tensor.alg", "irr.alg", "theta.alg", "simpleaf.alg", "weighted.alg"])
def test_samples_build(name):
    built = build(loader_factory.load_model(name).main())
    assert built.module.n >= 1


def test_m2m3_sample_declares_its_swap():
    model = loader_factory.load_model("m2m3.alg").main()
    assert model.kind == AlgebraKind.FINITE_DIMENSIONAL
    assert model.sizes == (2, 3)
    assert contains(build(model).closed_form, model.realized[0])


def test_multiline_algebra_block():
    model_file = loader_factory.load_model("prime.alg")
    assert model_file.algebra_names() == ("M2inf", "M3inf", "prime")
    assert model_file.main().kind == AlgebraKind.DIRECT_SUM


def test_weighted_sample_dual_system():
    rows = model_dual_system(loader_factory.load_model("weighted.alg").main())
    assert rows == ((Fraction(9, 5), Fraction(-3, 5)), (Fraction(-4, 5), Fraction(8, 5)))


def test_symbol_atoms_reach_the_family():
    model_file = loader_factory.load_model("theta.alg")
    assert model_file.registry.names() == ("theta",)
    assert model_file.main().name


def test_model_file_from_tmp_path(tmp_path):
    path = tmp_path / "c2.alg"
    path.write_text("# two points\nalgebra c2 { kind=finite; sizes=1,1 }\n", encoding="utf-8")
    model_file = loader_factory.load_model(str(path))
    assert model_file.main().sizes == (1, 1)


@pytest.mark.parametrize(
    "text",
    [
        "algebra a { kind=finite; sizes=2,x }",
        "algebra a { kind=nope }",
        "algebra a { kind=finite; sizes=1; sizes=2 }",
        "algebra a { kind=sum; parts=b }",
        "algebra a { kind=finite; sizes=1,1\n",
        "atom sqrt 4",
        "atom sym t",
        "algebra a { family=unknown }",
        "main missing",
        "frobnicate",
    ],
)
def test_model_parse_errors(text):
    with pytest.raises(ParseError):
        parse_model_text(text)


def test_wrong_extension(tmp_path):
    path = tmp_path / "model.txt"
    path.write_text("algebra a { kind=finite; sizes=1 }", encoding="utf-8")
    with pytest.raises(ParseError):
        loader_factory.load_model(str(path))
    with pytest.raises(ParseError):
        loader_factory.load_model(str(tmp_path / "absent.alg"))


def test_loaders_dispatch_on_extension(tmp_path):
    model = tmp_path / "model.alg"
    model.write_text("algebra a { kind=finite; sizes=1 }", encoding="utf-8")
    assert loader_factory.load_model(str(model)).algebra_names() == ("a",)
    with pytest.raises(ParseError):
        loader_factory.load_diagram(str(model))


def test_bratteli_sample():
    diagram = loader_factory.load_diagram("small.brt")
    assert diagram.name == "small"
    assert dims(diagram, 3) == (36, 36)


def test_bratteli_family_selector():
    assert loader_factory.load_diagram("prime2.brt").is_infinite
    assert parse_bratteli_text("family simpleaf").name == "simpleaf"


@pytest.mark.parametrize(
    "text",
    [
        "",
        "1 1\n\n1 x\n0 1",
        "1 1\n\n1 0\n0 0",
        "family prime2 p=4",
        "family prime2 p",
        "family nope",
        "family simpleaf\n1 1",
    ],
)
def test_bratteli_parse_errors(text):
    with pytest.raises(ParseError):
        parse_bratteli_text(text)
