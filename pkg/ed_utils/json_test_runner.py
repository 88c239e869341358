"""unittest runner that writes one JSON record per test."""
import inspect
import json
import sys
import time
from unittest import result
from unittest.signals import registerResult

import ed_utils.decorators as decorators

DECORATOR_CLASSES = [
    klass for _name, klass in inspect.getmembers(decorators)
    if inspect.isclass(klass) and issubclass(klass, decorators.Decorator) and klass is not decorators.Decorator
]


class JSONTestResult(result.TestResult):

    def __init__(self, stream, descriptions, verbosity, records):
        super().__init__(stream, descriptions, verbosity)
        self.descriptions = descriptions
        self.records = records
        self._started = {}

    def getDescription(self, test):
        first_line = test.shortDescription()
        return first_line if self.descriptions and first_line else str(test)

    def getOutput(self):
        if not self.buffer:
            return ""
        out = self._stdout_buffer.getvalue()
        err = self._stderr_buffer.getvalue()
        if err:
            out = (out if out.endswith("\n") or not out else out + "\n") + err
        return out

    def startTest(self, test):
        self._started[test.id()] = time.perf_counter()
        super().startTest(test)

    def record(self, test, err=None):
        record = {
            "name": self.getDescription(test),
            "passed": err is None,
            "seconds": round(time.perf_counter() - self._started.get(test.id(), time.perf_counter()), 3),
        }
        output = self.getOutput() or ""
        if err is not None:
            record["feedback"] = output + f"Test Failed: {err[1]}\n"
        method = getattr(test, test._testMethodName)
        for dec in DECORATOR_CLASSES:
            dec.change_result(getattr(method, dec.get_attr_name(), None), record, output, err)
        self.records.append(record)

    def addSuccess(self, test):
        super().addSuccess(test)
        self.record(test)

    def addError(self, test, err):
        super().addError(test, err)
        self._mirrorOutput = False
        self.record(test, err)

    def addFailure(self, test, err):
        super().addFailure(test, err)
        self._mirrorOutput = False
        self.record(test, err)


class JSONTestRunner:

    resultclass = JSONTestResult

    def __init__(self, stream=sys.stdout, descriptions=True, verbosity=1, failfast=False, buffer=True):
        self.stream = stream
        self.descriptions = descriptions
        self.verbosity = verbosity
        self.failfast = failfast
        self.buffer = buffer
        self.json_data = {"testcases": []}

    def run(self, test):
        res = self.resultclass(self.stream, self.descriptions, self.verbosity, self.json_data["testcases"])
        registerResult(res)
        res.failfast = self.failfast
        res.buffer = self.buffer
        res.startTestRun()
        try:
            test(res)
        finally:
            res.stopTestRun()
        json.dump(self.json_data, self.stream, indent=4, ensure_ascii=False)
        self.stream.write("\n")
        return res
