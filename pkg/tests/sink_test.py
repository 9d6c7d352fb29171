#
# Copyright (c) 2021 Carsten Igel.
#
# This file is part of biocircuit.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Lesser General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public License
# along with this program. If not, see <http://www.gnu.org/licenses/>.
#

import io
import tempfile
import unittest
from pathlib import Path

from biocircuit.error import (
    ErrorHandler,
    LoggingErrorHandler,
    ParameterError,
    StdErrErrorHandler,
)
from biocircuit.sink import DirectorySink, MemorySink


class RecordingErrorHandler(ErrorHandler):
    def __init__(self) -> None:
        self.handled = []

    def handle(self, message: str, error: Exception) -> bool:
        self.handled.append((message, error))
        return True


class MemorySinkTest(unittest.TestCase):
    def test_collects_payloads(self) -> None:
        with MemorySink() as sink:
            sink.write("table.csv", b"a\n1\n")
            sink.write("report.txt", "PASS a ok\n")
        self.assertEqual(
            {"table.csv": b"a\n1\n", "report.txt": b"PASS a ok\n"},
            dict(sink.payloads),
        )
        self.assertEqual(("table.csv", "report.txt"), sink.written)

    def test_rejects_bad_writes(self) -> None:
        sink = MemorySink()
        with self.assertRaises(ParameterError):
            sink.write("a.csv", b"")
        with sink:
            sink.write("a.csv", b"")
            with self.assertRaises(ParameterError):
                sink.write("a.csv", b"")
            for name in ("../a.csv", "A.csv", "", "a/b.csv"):
                with self.assertRaises(ParameterError):
                    sink.write(name, b"")

    def test_open_state(self) -> None:
        sink = MemorySink()
        with self.assertRaises(ParameterError):
            sink.close()
        sink.open()
        with self.assertRaises(ParameterError):
            sink.open()
        sink.close()

    def test_failures_are_handled_and_propagated(self) -> None:
        handler = RecordingErrorHandler()
        with self.assertRaises(RuntimeError):
            with MemorySink(handler):
                raise RuntimeError("broken")
        self.assertEqual(1, len(handler.handled))
        self.assertIsInstance(handler.handled[0][1], RuntimeError)

    def test_failures_reach_the_given_stream(self) -> None:
        stream = io.StringIO()
        with self.assertRaises(RuntimeError):
            with MemorySink(StdErrErrorHandler(stream)):
                raise RuntimeError("broken")
        self.assertEqual("Report sink failure: broken\n", stream.getvalue())

    def test_failures_are_logged(self) -> None:
        with self.assertLogs("biocircuit.error", level="ERROR") as logs:
            with self.assertRaises(RuntimeError):
                with MemorySink(LoggingErrorHandler()):
                    raise RuntimeError("broken")
        self.assertIn("Report sink failure", logs.output[0])


class DirectorySinkTest(unittest.TestCase):
    def test_writes_files(self) -> None:
        with tempfile.TemporaryDirectory() as root:
            target = Path(root, "nested", "run")
            with DirectorySink(target) as sink:
                sink.write("report.txt", "PASS a ok\n")
            self.assertEqual(sink.directory, target)
            self.assertEqual(
                b"PASS a ok\n", target.joinpath("report.txt").read_bytes()
            )

    def test_unusable_directory(self) -> None:
        handler = RecordingErrorHandler()
        with tempfile.TemporaryDirectory() as root:
            blocker = Path(root, "file")
            blocker.write_text("x")
            with self.assertRaises(OSError):
                with DirectorySink(blocker.joinpath("run"), handler):
                    pass
        self.assertEqual(1, len(handler.handled))


if __name__ == "__main__":
    unittest.main()
