from .testfile import get_testfile_path
