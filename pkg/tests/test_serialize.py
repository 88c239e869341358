import csv
import io
import json
import unittest

from ed_utils.decorators import number

from report import TABLE1_COLUMNS, analyze_cubesum, analyze_type1, analyze_type2
from serialize import report_from_json, report_to_csv, report_to_json, rows_to_csv


class TestSerialize(unittest.TestCase):

    @number("7.1")
    def test_json_round_trip(self):
        for report in (analyze_type1(5, rank=2), analyze_type1(359, root_number=-1),
                       analyze_type2(79, 131), analyze_cubesum(62, sha_even=True)):
            self.assertEqual(report_from_json(report_to_json(report)), report, report.kind)

    @number("7.2")
    def test_json_shape(self):
        obj = json.loads(report_to_json(analyze_cubesum(62)))
        self.assertEqual(obj["inputs"], {"D": "62"})
        self.assertEqual(obj["verdict"]["status"], "CubeSum")
        self.assertEqual(obj["verdict"]["certificate"], {"x": "31", "y": "62"})
        self.assertEqual(obj["verdict"]["certificate_curve"], "E_-25947")
        self.assertIsNone(obj["verdict"]["rank"])
        obj = json.loads(report_to_json(analyze_type1(5)))
        self.assertEqual(obj["bounds"]["phi_K"]["lower"], "0")
        self.assertEqual(obj["bounds"]["phi_K"]["upper"], "3")
        self.assertIn("a-not-square-in-K", obj["bounds"]["phi_K"]["assumptions"])

    @number("7.3")
    def test_report_csv(self):
        rows = dict(csv.reader(io.StringIO(report_to_csv(analyze_type1(79, rank=4)))))
        self.assertEqual(rows["a"], "79")
        self.assertEqual(rows["S_a"], "∅")
        self.assertEqual(rows["sel3_K.lower"], "4")
        self.assertEqual(rows["sel3_K.upper"], "6")

    @number("7.4")
    def test_rows_csv(self):
        text = rows_to_csv([], TABLE1_COLUMNS)
        self.assertEqual(text, ",".join(TABLE1_COLUMNS) + "\n")
        text = rows_to_csv([{"a": "0", "error": "InvalidCurveError: E_0 is singular"}], TABLE1_COLUMNS)
        header, line = text.splitlines()
        self.assertTrue(header.endswith(",error"))
        self.assertTrue(line.startswith("0,"))


if __name__ == "__main__":
    unittest.main()
