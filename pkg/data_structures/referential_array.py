""" Fixed-length array of references

Backing store for the probe tables that cache class-group elements. The
slots live in a ctypes array of py_object, so the table pays for one
reference per slot and nothing else: (length * py_object) is the array
type and calling it allocates the slots.

Index bounds are left to the ctypes array, which raises IndexError.
"""
from __future__ import annotations

from ctypes import py_object
from typing import Generic, Iterator, TypeVar

T = TypeVar('T')


class ArrayR(Generic[T]):
    def __init__(self, length: int) -> None:
        """
        :complexity: O(length), every slot starts as None
        :raises ValueError: when length is not positive.
        """
        if length <= 0:
            raise ValueError(f"array length must be positive, got {length}")
        self.array = (length * py_object)()
        self.array[:] = [None] * length

    def __len__(self) -> int:
        return len(self.array)

    def __getitem__(self, index: int) -> T:
        return self.array[index]

    def __setitem__(self, index: int, value: T) -> None:
        self.array[index] = value

    def __iter__(self) -> Iterator[T]:
        """
        :complexity: O(length)
        """
        for index in range(len(self.array)):
            yield self.array[index]
