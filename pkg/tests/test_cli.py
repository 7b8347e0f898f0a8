"""Command-line behavior: modes, exit codes, stream separation, config."""

import io
from pathlib import Path

import pytest

from vanref.cli import RunConfig, cmd_check, cmd_format, cmd_scan, main

DATA_DIR = Path(__file__).parent / "data"
BIB_PATH = DATA_DIR / "vancouver.bib"
TEX_PATH = DATA_DIR / "manuscript.tex"


def run_format(**kwargs):
    out, err = io.StringIO(), io.StringIO()
    config = RunConfig(**kwargs)
    code = cmd_format(config, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_check(**kwargs):
    out, err = io.StringIO(), io.StringIO()
    code = cmd_check(RunConfig(**kwargs), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_scan(**kwargs):
    out, err = io.StringIO(), io.StringIO()
    code = cmd_scan(RunConfig(**kwargs), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


BIB = str(BIB_PATH)
TEX = str(TEX_PATH)


class TestFormat:
    def test_manuscript_mode_first_line(self):
        code, out, err = run_format(bib_paths=[BIB], tex_path=TEX)
        lines = out.splitlines()
        assert code == 0
        assert err == ""
        assert len(lines) == 48
        assert lines[0].startswith("1. Wilkinson J. ")

    def test_explicit_keys_mode(self):
        code, out, _ = run_format(
            bib_paths=[BIB], keys=["halpern.ubel.ea:solid-organ*1"])
        assert code == 0
        assert out == (
            "1. Halpern SD, Ubel PA, Caplan AL. Solid-organ transplantation "
            "in HIV-infected patients. N Engl J Med. 2002 Jul 25;347(4):284-7. "
            "Cited in PubMed; PMID 12140307.\n")

    def test_empty_key_list_fails(self):
        code, out, err = run_format(bib_paths=[BIB], keys=[])
        assert code == 1
        assert out == ""
        assert "no keys" in err

    def test_all_mode_uses_database_order(self):
        code, out, _ = run_format(bib_paths=[BIB])
        assert code == 0
        assert len(out.splitlines()) == 48

    def test_tex_numbering_overrides_database_order(self, tmp_path):
        bib = tmp_path / "two.bib"
        bib.write_text(
            "@book{first, title={Alpha}, publisher={P}, year={2000}}\n"
            "@book{second, title={Beta}, publisher={P}, year={2001}}\n",
            encoding="utf-8")
        tex = tmp_path / "doc.tex"
        tex.write_text("\\cite{second} then \\cite{first}", encoding="utf-8")
        code, out, _ = run_format(bib_paths=[str(bib)], tex_path=str(tex))
        assert code == 0
        assert out.splitlines() == [
            "1. Beta. P; 2001.",
            "2. Alpha. P; 2000.",
        ]

    def test_missing_key_warns_and_keeps_gap(self):
        code, out, err = run_format(bib_paths=[BIB],
                                    keys=["uniform", "nope", "mesh"])
        assert code == 0
        assert "nope" in err
        numbers = [line.split(".")[0] for line in out.splitlines()]
        assert numbers == ["1", "3"]

    def test_missing_key_fails_in_strict_mode(self):
        code, _, _ = run_format(bib_paths=[BIB], keys=["nope"], strict=True)
        assert code == 1

    def test_unreadable_bib_is_io_error(self):
        code, out, err = run_format(bib_paths=["/no/such/file.bib"])
        assert code == 2
        assert out == ""
        assert "cannot read" in err

    def test_undecodable_bib_is_io_error(self, tmp_path):
        binary = tmp_path / "junk.bib"
        binary.write_bytes(b"@misc{k,\xff\xfe t={v}}")
        code, out, err = run_format(bib_paths=[str(binary)])
        assert code == 2
        assert out == ""
        assert "cannot read" in err

    def test_deterministic_output(self):
        first = run_format(bib_paths=[BIB], tex_path=TEX)
        second = run_format(bib_paths=[BIB], tex_path=TEX)
        assert first == second

    def test_markdown_mode_escapes_and_numbers(self):
        code, out, _ = run_format(
            bib_paths=[BIB], keys=["borkowski:infant"],
            output_format="markdown")
        assert code == 0
        assert out.startswith("1. ")
        assert "\\[dissertation\\]" in out

    def test_out_path_writes_file(self, tmp_path):
        target = tmp_path / "refs.txt"
        code, out, _ = run_format(bib_paths=[BIB], keys=["mesh"],
                                  out_path=str(target))
        assert code == 0
        assert out == ""
        assert target.read_text(encoding="utf-8").startswith("1. MeSH Browser")

    def test_max_authors_override(self):
        code, out, _ = run_format(
            bib_paths=[BIB], keys=["rose.huerbin.ea:regulation"],
            max_authors=2)
        assert code == 0
        assert out.startswith("1. Rose ME, Huerbin MB, et al.")

    def test_no_bib_paths_is_io_error(self):
        code, _, _ = run_format(bib_paths=[])
        assert code == 2

    def test_macros_shared_across_files(self, tmp_path):
        first = tmp_path / "strings.bib"
        first.write_text("@string{jx = {Journal of X}}", encoding="utf-8")
        second = tmp_path / "refs.bib"
        second.write_text(
            "@article{k, author={Smith, Jo}, title={T}, journal=jx, "
            "year={1999}, volume={1}, pages={2--3}}", encoding="utf-8")
        code, out, err = run_format(bib_paths=[str(first), str(second)],
                                    keys=["k"])
        assert code == 0
        assert err == ""
        assert "Journal of X" in out


class TestCheck:
    def test_clean_corpus_passes(self):
        code, out, err = run_check(bib_paths=[BIB])
        assert code == 0
        assert "48 entries" in out
        assert err == ""

    def test_missing_title_is_error(self, tmp_path):
        bad = tmp_path / "bad.bib"
        bad.write_text("@article{k, journal={J}, year={2000}}",
                       encoding="utf-8")
        code, _, err = run_check(bib_paths=[str(bad)])
        assert code == 1
        assert "title" in err

    def test_duplicate_key_warns_only(self, tmp_path):
        dup = tmp_path / "dup.bib"
        dup.write_text(
            "@article{k, title={T}, journal={J}, year={2000}}\n"
            "@article{k, title={T}, journal={J}, year={2000}}",
            encoding="utf-8")
        code, _, err = run_check(bib_paths=[str(dup)])
        assert code == 0
        assert "duplicate" in err
        strict_code, _, _ = run_check(bib_paths=[str(dup)], strict=True)
        assert strict_code == 1

    def test_unknown_field_warns(self, tmp_path):
        odd = tmp_path / "odd.bib"
        odd.write_text(
            "@article{k, title={T}, journal={J}, year={2000}, flavor={mint}}",
            encoding="utf-8")
        code, _, err = run_check(bib_paths=[str(odd)])
        assert code == 0
        assert "flavor" in err


class TestScan:
    def test_first_three_lines(self):
        code, out, _ = run_scan(tex_path=TEX)
        assert code == 0
        assert out.splitlines()[:3] == [
            "1 uniform",
            "2 bibliographic",
            "3 halpern.ubel.ea:solid-organ*2",
        ]

    def test_no_citations_is_empty_success(self, tmp_path):
        empty = tmp_path / "empty.tex"
        empty.write_text("no citations here", encoding="utf-8")
        code, out, err = run_scan(tex_path=str(empty))
        assert (code, out, err) == (0, "", "")

    def test_empty_cite_fails_in_strict_mode(self, tmp_path):
        bad = tmp_path / "bad.tex"
        bad.write_text("\\cite{}", encoding="utf-8")
        code, _, err = run_scan(tex_path=str(bad), strict=True)
        assert code == 1
        assert "cite" in err
        lax_code, _, _ = run_scan(tex_path=str(bad))
        assert lax_code == 0  # warning only outside strict mode

    def test_unreadable_tex_is_io_error(self):
        code, _, _ = run_scan(tex_path="/no/such/file.tex")
        assert code == 2


class TestMainAndConfig:
    def test_main_format_smoke(self, capsys):
        code = main(["format", "--bib", BIB, "--keys", "filamin"])
        captured = capsys.readouterr()
        assert code == 0
        assert captured.out.startswith("1. Dorland's")
        assert captured.err == ""

    def test_config_file_sets_max_authors(self, tmp_path, monkeypatch, capsys):
        config = tmp_path / "vanref.conf"
        config.write_text("# settings\nmax_authors = 2\n", encoding="utf-8")
        monkeypatch.setenv("VANREF_CONFIG", str(config))
        code = main(["format", "--bib", BIB, "--keys",
                     "rose.huerbin.ea:regulation"])
        captured = capsys.readouterr()
        assert code == 0
        assert captured.out.startswith("1. Rose ME, Huerbin MB, et al.")

    def test_flag_wins_over_config_file(self, tmp_path, monkeypatch, capsys):
        config = tmp_path / "vanref.conf"
        config.write_text("max_authors = 2\n", encoding="utf-8")
        monkeypatch.setenv("VANREF_CONFIG", str(config))
        code = main(["format", "--bib", BIB, "--keys",
                     "rose.huerbin.ea:regulation", "--max-authors", "6"])
        captured = capsys.readouterr()
        assert code == 0
        assert "Schiding JK, et al." in captured.out

    def test_missing_config_file_is_io_error(self, monkeypatch, capsys):
        monkeypatch.setenv("VANREF_CONFIG", "/no/such/config")
        code = main(["format", "--bib", BIB, "--all"])
        assert code == 2
        assert "config" in capsys.readouterr().err

    def test_scan_via_main(self, capsys):
        code = main(["scan", "--tex", TEX])
        assert code == 0
        assert capsys.readouterr().out.splitlines()[0] == "1 uniform"

    def test_zero_max_authors_is_rejected(self, capsys):
        code = main(["format", "--bib", str(BIB_PATH), "--all",
                     "--max-authors", "0"])
        assert code == 2
        assert "at least 1" in capsys.readouterr().err


@pytest.mark.parametrize("key,expected_fragment", [
    ("geraud.spierings.ea:tolerability", "Headache. 2002;42 Suppl 2:S93-9."),
    ("banit.kaufer.ea:intraoperative", "Clin Orthop. 2002;(401):230-8."),
    ("chadwick.schuklenk:politics", "Bioethics. 2002;16(2):iii-v."),
])
def test_spot_check_lines(key, expected_fragment):
    code, out, _ = run_format(bib_paths=[BIB], keys=[key])
    assert code == 0
    assert expected_fragment in out
