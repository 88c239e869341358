import contextlib
import csv
import io
import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from ed_utils.decorators import number

import classgroup_cache
from constants import CACHE_ENV_VAR, LIMIT_ENV_VAR, ExitCode
from main import main, read_rows


class TestCommandLine(unittest.TestCase):

    def setUp(self) -> None:
        self.env = mock.patch.dict(os.environ, {CACHE_ENV_VAR: "", LIMIT_ENV_VAR: ""})
        self.env.start()
        self.dir = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        classgroup_cache._active = None
        self.dir.cleanup()
        self.env.stop()

    def run_main(self, *argv: str) -> tuple[int, str]:
        out = io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
            code = main(list(argv))
        return code, out.getvalue()

    def write(self, name: str, text: str) -> str:
        path = Path(self.dir.name) / name
        path.write_text(text)
        return str(path)

    @number("7.5")
    def test_type1_json(self):
        code, out = self.run_main("type1", "--a", "5", "--json")
        self.assertEqual(code, ExitCode.OK.value)
        bounds = json.loads(out)["bounds"]["phi_K"]
        self.assertEqual((bounds["lower"], bounds["upper"]), ("0", "3"))
        code, out = self.run_main("type1", "--a", "7", "--root-number", "+1", "--json")
        self.assertEqual(json.loads(out)["exact"]["dim Sel^φ(E/K)"], "0")
        code, out = self.run_main("type1", "--a", "359", "--root-number", "-1", "--json")
        self.assertEqual(json.loads(out)["exact"]["dim Sel^φ(E/K)"], "3")

    @number("7.6")
    def test_plain_output(self):
        code, out = self.run_main("cubesum", "--D", "62")
        self.assertEqual(code, ExitCode.OK.value)
        self.assertIn("verdict: CubeSum", out)
        self.assertIn("E_-25947", out)
        code, out = self.run_main("type2", "--a", "79", "--b", "131", "--csv")
        self.assertEqual(code, ExitCode.OK.value)
        self.assertIn("psi_K.lower,2", out)

    @number("7.7")
    def test_error_exits(self):
        self.assertEqual(self.run_main("type1", "--a", "0")[0], ExitCode.INPUT_ERROR.value)
        self.assertEqual(self.run_main("type2", "--a", "1", "--b", "0")[0], ExitCode.INPUT_ERROR.value)
        self.assertEqual(self.run_main("cubesum", "--D", "6")[0], ExitCode.INPUT_ERROR.value)
        self.assertEqual(self.run_main("--limit", "10", "type1", "--a", "359")[0], ExitCode.LIMIT_EXCEEDED.value)
        self.assertEqual(self.run_main("cache", "show")[0], ExitCode.INPUT_ERROR.value)

    @number("7.8")
    def test_table(self):
        rows = self.write("rows.csv", "a,r\n5,2\n79,4\n")
        self.assertEqual(read_rows(rows, 1), [((5,), 2), ((79,), 4)])
        code, out = self.run_main("table", "--which", "1", "--rows", rows)
        self.assertEqual(code, ExitCode.OK.value)
        five, seventy_nine = csv.DictReader(io.StringIO(out))
        self.assertEqual(five["S_a"], "{2O_K}")
        self.assertEqual([five[k] for k in ("s^φ_l", "s^φ_u", "s³_l", "s³_u")], ["0", "3", "2", "6"])
        self.assertEqual(seventy_nine["S_a"], "∅")
        self.assertEqual(seventy_nine["h³_{S_a(L)}"], "2")
        self.assertEqual([seventy_nine[k] for k in ("s^φ_l", "s^φ_u", "s³_l", "s³_u")], ["2", "3", "4", "6"])

    @number("7.9")
    def test_table_edges(self):
        code, out = self.run_main("table", "--which", "1", "--rows", self.write("empty.csv", "a,r\n"))
        self.assertEqual(code, ExitCode.OK.value)
        self.assertEqual(len(out.splitlines()), 1)
        code, out = self.run_main("table", "--which", "1", "--rows", self.write("bad.csv", "a,r\n0,\n5,\n"))
        self.assertEqual(code, ExitCode.INPUT_ERROR.value)
        bad, good = csv.DictReader(io.StringIO(out))
        self.assertIn("InvalidCurveError", bad["error"])
        self.assertEqual(good["error"], "")
        self.assertEqual(good["s^φ_u"], "3")
        rows = self.write("pairs.csv", "a,b\n79,131\n")
        self.assertEqual(read_rows(rows, 2), [((79, 131), None)])

    @number("7.10")
    def test_cache_commands(self):
        path = self.write("groups.tsv", "-23\t5\n")
        code, out = self.run_main("--cache", path, "cache", "show")
        self.assertEqual((code, out), (ExitCode.OK.value, "-23\t5\n"))
        self.assertEqual(self.run_main("--cache", path, "cache", "verify")[0], ExitCode.INCONSISTENT.value)
        self.assertEqual(self.run_main("--cache", path, "cache", "clear")[0], ExitCode.OK.value)
        self.assertEqual(Path(path).read_text(), "")
        code, out = self.run_main("--cache", path, "cache", "verify")
        self.assertEqual(code, ExitCode.OK.value)
        self.assertIn("0 records", out)


if __name__ == "__main__":
    unittest.main()
