#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# nwalign documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.

import os
import sys
import re

sys.path.insert(0, os.path.abspath('..'))  # For autodoc and version loading
from nwalign import __version__ as nwalign_version
# Cleanup dirty local version
nwalign_version = re.sub(r'\.d[0-9]{8}', '', nwalign_version)

# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.napoleon',
              'sphinx.ext.doctest',
              ]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'nwalign'
copyright = '2026 nwalign developers'
author = 'nwalign developers'

version = nwalign_version
release = nwalign_version

language = "en"
exclude_patterns = ['build', 'Thumbs.db', '.DS_Store']

pygments_style = "default"
pygments_dark_style = "native"

todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = 'furo'

htmlhelp_basename = 'nwaligndoc'


# -- Options for LaTeX output ---------------------------------------------

latex_elements = {}

latex_documents = [
    (master_doc, 'nwalign.tex', 'nwalign Documentation',
     author, 'manual'),
]


# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'nwalign', 'nwalign Documentation',
     [author], 1)
]
