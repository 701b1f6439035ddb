"""
Overview:
    Meta information for acdckit package.
"""

#: Title of this project (should be `acdckit`).
__TITLE__ = "acdckit"

#: Version of this project.
__VERSION__ = "0.1.0"

#: Short description of the project, will be included in ``setup.py``.
__DESCRIPTION__ = 'Sparse training toolkit with iterative hard thresholding, ' \
                  'alternating compressed/decompressed training and FLOPs accounting.'

#: Author of this project.
__AUTHOR__ = "HansBug"

#: Email of the authors'.
__AUTHOR_EMAIL__ = "hansbug@buaa.edu.cn"
