import os
import sys

from setuptools import setup

here = os.path.abspath(os.path.dirname(__file__))
py_version = sys.version_info[:2]
if py_version < (3, 8):
    raise Exception("ssdseas requires Python >= 3.8.")

with open(os.path.join(here, 'README.rst')) as readme:
    README = readme.read()
with open(os.path.join(here, 'CHANGES.rst')) as changes:
    CHANGES = changes.read()

NAME = 'ssdseas'

install_requires = [
    'numpy>=1.20',
    'tabulate>=0.8.9',
]

tests_require = [
    'pytest>=7.0',
    'hypothesis>=6.0',
]
setup(
    name=NAME,
    version='0.1',
    description='Aliasing structure (M-, A-, P-patterns) of two-level supersaturated designs',
    long_description=README + '\n\n' + CHANGES,
    classifiers=[
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    license='GPL-3.0',
    keywords='design of experiments supersaturated designs aliasing wordlength pattern',
    packages=['ssdseas', 'ssdseas.test'],
    package_data={
        'ssdseas': ['designs/*.vec'],
        'ssdseas.test': ['data/*.json'],
    },
    include_package_data=True,
    zip_safe=False,
    install_requires=install_requires,
    extras_require={
        'dev': tests_require,
    },
    entry_points={
          'console_scripts': [
              'ssdseas = ssdseas.__main__:main'
          ]
    },
)
