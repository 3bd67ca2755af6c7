from os.path import join
import setuptools

# We expect "chirpfit/version.py" to be very simple:
#
# > __version__ = "x.y.z"
__version__ = ''
exec(open(join('chirpfit', 'version.py')).read())
requirements = [
    line for line in open('requirements.txt').read().split('\n') if line]

setuptools.setup(
    name='chirpfit',
    version=__version__.replace('-develop', '.dev0'),
    packages=setuptools.find_packages(),
    scripts=['./bin/chirpfit.py'],
    author='The chirpfit developers',
    description="Sequential and joint estimation of multi-component chirps "
                "with a common chirp rate.",
    long_description=open('README.md').read(),
    long_description_content_type="text/markdown",
    include_package_data=True,
    install_requires=requirements,
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent",
    ],
    python_requires='>=3.8',
)
