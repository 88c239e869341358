import abc


class InvalidValueException(Exception):
    pass


class Decorator(abc.ABC):
    """
    Stores a value on the test function under __<ClassName>__ for the
    runners to read back.
    """

    def __init__(self, v) -> None:
        problem = self.validate(v)
        if problem:
            raise InvalidValueException(problem)
        self.v = v

    def validate(self, v):
        return None

    def __call__(self, func):
        setattr(func, self.get_attr_name(), self.v)
        return func

    @classmethod
    def get_attr_name(cls):
        return f"__{cls.__name__}__"

    @classmethod
    @abc.abstractmethod
    def change_result(cls, saved_value, results: dict, output: str, err):
        """
        Adjust the JSON record of one test. Called for every test, with
        saved_value None when the decorator was not applied.
        """


class number(Decorator):
    """@number("3.2") files a test under module 3; run_tests.py filters on the prefix."""

    def validate(self, v):
        parts = str(v).split(".")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            return f"Test number should look like '3.2', got {v!r}."

    @classmethod
    def change_result(cls, saved_value, results: dict, output: str, err):
        if saved_value is not None:
            results["name"] = f"{saved_value}: {results['name']}"


class slow(Decorator):
    """Acceptance-scale test, skipped unless run_tests.py gets --slow."""

    def __init__(self) -> None:
        self.v = True

    @classmethod
    def change_result(cls, saved_value, results: dict, output: str, err):
        if saved_value is not None:
            results["name"] = f"[SLOW] {results['name']}"
